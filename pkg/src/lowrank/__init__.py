"""Low-rank interpolative, two-sided ID and CUR factorizations."""

from .bounds import frobenius_excess, verify_corollary, verify_lemma1, verify_lemma2
from .core import (
    PivotedQr,
    SolveStrategy,
    Svd,
    cpqr_full,
    cpqr_partial,
    frobenius_norm,
    orth_rows,
    pinv,
    singular_values,
    spectral_norm,
    stabilized_coeff_solve,
    svd,
)
from .errors import (
    ConvergenceError,
    InputError,
    LowRankError,
    ParameterError,
    ParseError,
    SingularityError,
    ValidationError,
)
from .factorize import (
    ColumnId,
    CurDecomposition,
    ErrorReport,
    RowId,
    TwoSidedId,
    cur_id,
    cur_refined_u,
    error_report,
    id_column,
    id_row,
    id_two_sided,
    reconstruct_cur,
    reconstruct_id,
    reconstruct_tsid,
    storage_units,
)
from .io import (
    ResultRecord,
    read_binary,
    read_matrix,
    read_matrix_market,
    read_results_csv,
    write_binary,
    write_matrix_market,
    write_results_csv,
)
from .matgen import SpectrumSpec, gen_logspace, gen_sorensen_embree, random_orthonormal
from .sketch import (
    SampleMatrix,
    SketchConfig,
    randomized_cur,
    randomized_id,
    randomized_svd,
    sketch,
    sketch_gaussian,
    sketch_power,
    sketch_srft,
)

__version__ = "0.1.0"
