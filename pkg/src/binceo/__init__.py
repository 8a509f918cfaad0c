"""Distributed lossy coding of a binary source observed through independent
noisy links: rate-distortion bounds under log-loss, LDGM quantization, LDPC
syndrome binning, successive sum-product decoding, and reproduction
harness."""

from .bounds import (
    BoundPoint,
    JointPmf,
    RegionReport,
    TestChannelPoint,
    bound_point,
    h_b,
    joint_entropy_U,
    min_rate_at_distortion,
    nu_vector,
    optimize_allocation,
    optimized_envelope,
    region_check,
    sweep_curves,
)
from .channel import CeoScenario, bconv, chain_crossover, generate_instance, substream
from .codes import (
    CompoundCode,
    DegreeDistribution,
    InfeasibleCodeError,
    LdgmCode,
    LdpcCode,
    LinkPlan,
    get_preset,
    plan_rates,
    sample_ldgm,
    sample_ldpc,
)
from .gf2 import (
    BitSequence,
    DimensionError,
    SparseBinaryMatrix,
    concat,
    hamming_distortion,
    mat_vec_mul,
    read_alist,
    write_alist,
)
from .harness import (
    ExperimentConfig,
    OperatingPoint,
    ReproductionReport,
    emit_curves,
    load_config,
    reproduce_table1,
    run_experiment,
)
from .quantizer import (
    QuantizationResult,
    QuantizerParams,
    QuantizerShortfall,
    quantize,
)
from .splitting import (
    SplitPair,
    SplitStrategy,
    estimate_alpha_beta,
    linear_info_masks,
    merge,
    split,
)
from .wz import (
    DecodeChain,
    LinkMessage,
    PosteriorSequence,
    RawPart,
    Stage,
    account_rates,
    log_loss,
    make_syndrome,
    soft_reconstruct,
    sp_decode,
    successive_decode,
)

__version__ = "0.1.0"
