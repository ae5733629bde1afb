"""Doubly truncated moment risk measures."""
