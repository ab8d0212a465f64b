from decouple import config
from dotenv import load_dotenv

load_dotenv()


DEBUG = config("DEBUG", default=False, cast=bool)
LOG_LEVEL = config("LOG_LEVEL", default="DEBUG" if DEBUG else "INFO").upper()

# directory holding the raw UCI files
WBCD_DATA_DIR = config("WBCD_DATA_DIR", default="./data")
WBCD_REPORTS_DIR = config("WBCD_REPORTS_DIR", default="./reports")

WBCD_ROOT_SEED = config("WBCD_ROOT_SEED", cast=int, default=2021)
# seeds per matrix cell
WBCD_SEED_COUNT = config("WBCD_SEED_COUNT", cast=int, default=5)
WBCD_MATRIX_WORKERS = config("WBCD_MATRIX_WORKERS", cast=int, default=1)

# file names looked up inside WBCD_DATA_DIR when no explicit --input is given
WBCD_ORIGINAL_FILE = config("WBCD_ORIGINAL_FILE", default="breast-cancer-wisconsin.data")
WBCD_DIAGNOSTIC_FILE = config("WBCD_DIAGNOSTIC_FILE", default="wdbc.data")
WBCD_PROGNOSTIC_FILE = config("WBCD_PROGNOSTIC_FILE", default="wpbc.data")
