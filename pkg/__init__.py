"""Robust rank-dependent expected utility under Wasserstein uncertainty"""
