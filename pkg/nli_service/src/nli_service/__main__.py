"""Entry point: run the service under uvicorn."""

import argparse
import logging

import uvicorn

from .app import create_app
from .config import ServiceConfig


def main() -> None:
    parser = argparse.ArgumentParser(description="zero-shot NLI scoring service")
    parser.add_argument("--model", default=None, help="model id (overrides env)")
    parser.add_argument("--host", default=None)
    parser.add_argument("--port", type=int, default=None)
    parser.add_argument("--device", default=None)
    args = parser.parse_args()

    config = ServiceConfig.from_env()
    overrides = {
        k: v
        for k, v in {
            "model_id": args.model,
            "host": args.host,
            "port": args.port,
            "device": args.device,
        }.items()
        if v is not None
    }
    if overrides:
        from dataclasses import replace

        config = replace(config, **overrides)

    logging.basicConfig(level=logging.INFO)
    uvicorn.run(create_app(config), host=config.host, port=config.port)


if __name__ == "__main__":
    main()
