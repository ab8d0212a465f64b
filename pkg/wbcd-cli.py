#!/usr/bin/env python3
import os  # noqa
import sys  # noqa

sys.path.insert(0, os.getcwd())  # noqa

import typer

from cli.app import app

if __name__ == "__main__":
    typer.completion.completion_init()
    app(prog_name=os.environ.get('CLI_PROG_NAME'))
