"""Tests for middleware components"""
