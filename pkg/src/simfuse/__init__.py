"""simfuse: sentence-pair semantic similarity from three fused scorers.

Three independent similarity signals (pair-scoped TF-IDF cosine, a
grammatical-role-weighted Jaccard coefficient, and an attention-weighted
convolutional scorer over word embeddings) are combined with per-model
weights calibrated from validation metrics.
"""

from .attention import (AttentionVectors, SimilarityGrid, apply_attention,
                        attention_weights, cosine_matrix, edit_distance,
                        marginal_sums, position_weights, weighted_pair_matrices)
from .cnn import (CnnParams, TrainConfig, cnn_forward, cnn_train,
                  gradient_check, init_params, load_cnn_params, save_cnn_params)
from .corpus import (BINARY, GRADED, ONE_IS_SIMILAR, ROLES, ZERO_IS_SIMILAR,
                     Dataset, LabeledPair, Sentence, Token,
                     assign_roles_heuristic, parse_annotated, parse_pair_file,
                     serialize_pairs, tokenize)
from .embedding import (EmbeddingTable, SentenceMatrix, embed_sentence,
                        load_text_embeddings, lookup, save_text_embeddings)
from .errors import (ConfigError, DegenerateData, DimensionError, EmptyCorpus,
                     EmptyEval, EmptySentence, FormatError, LabelKindError,
                     SimfuseError, UndefinedCorrelation)
from .fusion import (DEFAULT_WEIGHTS, DIFFERENT, LEARNED, SIMILAR,
                     WEIGHTED_SUM, FusionNet, FusionParams, FusionWeights,
                     calibrate_weights, classify, fuse, load_fusion_params,
                     save_fusion_params, scale_to_sts, train_fusion)
from .jaccard import CoOccurrence, co_occurrence, component_weight, jaccard_score
from .metrics import (MetricReport, confusion_counts, prf_metrics,
                      rank_correlations)
from .pipeline import (ModelBundle, PairScores, calibrate, component_scores,
                       evaluate, load_bundle, save_bundle, score_pair,
                       score_with_bundle)
from .tfidf import (CorpusStats, TfIdfVector, build_stats, cosine_sim, idf,
                    term_frequency, tfidf_vector)

__version__ = "0.1.0"
