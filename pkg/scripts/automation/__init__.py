"""
Automation Module
===============

Experiment pipeline behind the command-line verbs.
"""

from .pipeline import ExperimentPipeline, REFERENCE_VALUES, compare_to_reference

__all__ = ['ExperimentPipeline', 'REFERENCE_VALUES', 'compare_to_reference']
