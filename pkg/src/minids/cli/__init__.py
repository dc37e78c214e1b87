"""Command-line helpers: console output, progress display and command bodies"""
