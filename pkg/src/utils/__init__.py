"""Parsing and rendering helpers for the command line."""
