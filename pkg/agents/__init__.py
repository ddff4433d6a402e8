"""Agents that run sampling workflows and validation suites."""

from agents.sampling_agent import get_sampling_agent
from agents.validation_agent import get_validation_agent

__all__ = [
    "get_sampling_agent",
    "get_validation_agent",
]
