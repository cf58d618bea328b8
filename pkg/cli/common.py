#!/usr/bin/env python3
"""
Shared argument helpers for the subcommand modules
"""

import json
import logging
from pathlib import Path
from typing import Any, List, Optional

logger = logging.getLogger(__name__)


def parse_int_list(text: str) -> List[int]:
    """'108,108' -> [108, 108]; empty string -> []"""
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise ValueError(f"expected comma-separated integers, got {text!r}")


def load_json(path: Optional[str]) -> Optional[Any]:
    if path is None:
        return None
    with open(Path(path), "r") as f:
        data = json.load(f)
    logger.debug(f"Loaded {path}")
    return data


def echo_inputs(args, *names: str) -> dict:
    """The named argparse values, for the report's input echo"""
    return {name: getattr(args, name) for name in names if hasattr(args, name)}
