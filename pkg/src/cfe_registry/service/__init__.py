"""Networked registry: HTTP API, auth, append-only persistence, public exports."""
