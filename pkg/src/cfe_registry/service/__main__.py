"""Run the registry service: python -m cfe_registry.service [--config path]."""

from __future__ import annotations

import argparse

import uvicorn

from cfe_registry.service.api import create_app
from cfe_registry.service.config import load_config
from cfe_registry.service.registry import Registry


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(prog="cfe-registry-service")
    parser.add_argument("--config", default=None, help="path to JSON config file")
    parser.add_argument("--host", default=None)
    parser.add_argument("--port", type=int, default=None)
    args = parser.parse_args(argv)

    config = load_config(args.config)
    if args.host:
        config.host = args.host
    if args.port:
        config.port = args.port

    registry = Registry(config)
    app = create_app(registry)
    try:
        uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    finally:
        registry.close()


if __name__ == "__main__":
    main()
