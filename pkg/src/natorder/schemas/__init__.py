"""JSON schemas for the ``--json`` output of each CLI subcommand."""

import json
from importlib import resources

COMMANDS = ("list", "verify", "mindet", "export", "simulate", "enumerate")


def load(command: str) -> dict:
    if command not in COMMANDS:
        raise KeyError(f"no schema for {command!r}")
    return json.loads(resources.files(__name__).joinpath(f"{command}.schema.json").read_text())
