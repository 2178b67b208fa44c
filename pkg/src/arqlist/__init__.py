"""List decoding of undetected ARQ errors with Markov-context selection."""

from .analysis import ArqAnalysis, arq_metrics, p_list, sweep
from .channel import (ArqOutcome, BscChannel, RunawayChannelError, arq_transmit,
                      monte_carlo_arq, sample_sentence, transmit)
from .clda import (CldaTrace, MarkovContext, clda_select, count_optimal, cyclic_context,
                   example1_context, example1_lists, exhaustive_select, random_context,
                   sentence_weight, uniform_context)
from .codes import (CapacityError, CodeParameterError, LinearCode, dual_code, encode,
                    hamming_code, hamming_distance, is_codeword, reed_muller_code,
                    repetition_code)
from .listdec import DecodeList, ball, decode_list, same_list_set
from .performance import (BoundReport, in_list_probability, lower_bound_ec,
                          max_sentence_length, p_average, p_retrans, simulate_clda)
from .weights import (WeightDistribution, macwilliams_transform, weight_distribution,
                      weight_distribution_exhaustive, weight_enumerator_eval)

__version__ = "0.1.0"
