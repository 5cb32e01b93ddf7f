"""Model file formats, run records and the command line."""

from .cli import cli_main
from .formats import load_model, parse_native, parse_uai, save_model, serialize_native
from .records import RunRecord, read_run_record, record_filename, write_run_record

__all__ = [
    "RunRecord",
    "cli_main",
    "load_model",
    "parse_native",
    "parse_uai",
    "read_run_record",
    "record_filename",
    "save_model",
    "serialize_native",
    "write_run_record",
]
