# ruff: noqa: F401
from .cli import main
