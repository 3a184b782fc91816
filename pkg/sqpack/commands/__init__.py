"""Subcommands of the sqpack command line; each module exposes register(subparsers)."""
