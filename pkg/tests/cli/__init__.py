"""Tests for CLI components"""
