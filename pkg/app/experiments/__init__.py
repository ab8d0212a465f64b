from .pipeline import PreparedFold, prepare_fold  # noqa
from .reports import (GridFormat, Statistic, accuracy_grid, load_reports,  # noqa
                      render_grid, summarize, write_report, write_summary,
                      write_trace_files)
from .runner import (MatrixResult, compare_optimizers, load_raw,  # noqa
                     run_matrix, run_scenario, summarize_cell)
