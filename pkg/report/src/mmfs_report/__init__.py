"""Offline figures and tables from mmfs experiment JSONL output."""

from .render import ReportBundle, render
from .schema import Record, SchemaError, read_records

__version__ = "0.1.0"
