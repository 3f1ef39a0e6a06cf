"""
Ingestion pipeline for instance files and code artifacts.
"""

from ficoder.pipeline.instance_parser import parse_instance_text, get_line_for_path
from ficoder.pipeline.instance_loader import load_instance, instance_from_dict

__all__ = [
    "parse_instance_text",
    "get_line_for_path",
    "load_instance",
    "instance_from_dict",
]
