"""
Reporting Module
==============

This module handles plot scripts, workbooks and dashboards for experiment runs.
"""

from .excel import ExperimentWorkbookReporter
from .dashboard import ExperimentDashboardGenerator
from .gnuplot import write_line_plot, write_map_plot, line_script, map_script

__all__ = [
    'ExperimentWorkbookReporter', 'ExperimentDashboardGenerator',
    'write_line_plot', 'write_map_plot', 'line_script', 'map_script',
]
