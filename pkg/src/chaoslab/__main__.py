"""`python -m chaoslab` entry point."""

from .cli import main

main()
