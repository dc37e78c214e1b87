"""Experiment drivers for the benchmark protocols"""
