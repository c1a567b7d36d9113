"""Data models for maslov-kernel."""
