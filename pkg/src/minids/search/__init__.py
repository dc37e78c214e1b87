"""Neighborhood search, plateau search and the ILPS metaheuristic"""
