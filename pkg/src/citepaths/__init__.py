"""Journal rankings on projected versus path-respecting citation networks."""
from . import _backend
from .audit import IngestAudit, ValidationOptions
from .compare import (RankingComparison, comparison_curves, kendall_tau_b, rank_change_table,
                      render_change, topk_kendall, topk_overlap)
from .errors import (CitepathsError, ComputationError, ConfigurationError, ConvergenceError,
                     DegenerateInputError, DomainError, EmptyCorpusError, IngestError,
                     InputError)
from .graph import CitationEdge, PaperGraph, PaperRecord, build_paper_graph, journal_of
from .ingest import CorpusStats, corpus_stats, load_corpus, parse_citations, parse_metadata
from .paths import (PathCensus, PathFlowTable, count_implied_2paths, count_observed_2paths,
                    focal_path_flows, path_census)
from .projection import JournalGraph, TransitionMatrix, project, transition_matrix
from .ranking import (PageRankConfig, ScoreVector, aggregate_to_journals,
                      citation_count_baseline, pagerank_journal, pagerank_paths,
                      teleport_distribution)

__version__ = "0.1.0"
BACKEND = _backend.name
