"""Core data structures: graph, solution state, configuration and randomness"""
