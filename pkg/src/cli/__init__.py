from .generators import GENERATOR_KINDS, generate, linear_order, monotone_family, random_matrix, shatter_family
from .matrix_io import matrix_to_csv_text, read_matrix_csv, write_matrix_csv
from .report_writer import build_report, load_json, verify_report, write_json
