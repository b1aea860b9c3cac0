"""
Singularity Hodge-level toolkit entry point.

Configures logging (stderr, so stdout carries only reports) and runs the CLI.
"""

import asyncio
import logging
import sys

from config import LOG_FORMAT, LOG_LEVEL
from cli import main

# Set up logging
logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
logger = logging.getLogger(__name__)

if __name__ == "__main__":
    # Handle Windows event loop policy
    if sys.platform == 'win32':
        asyncio.set_event_loop_policy(asyncio.WindowsProactorEventLoopPolicy())

    sys.exit(asyncio.run(main()))
