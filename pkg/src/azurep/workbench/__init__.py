"""Batch runner for JSON problem files."""

from .tasks import TASKS, Context, run_problem

__all__ = ["TASKS", "Context", "run_problem"]
