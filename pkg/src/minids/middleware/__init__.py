"""Per-iteration hooks for ILPS runs"""
