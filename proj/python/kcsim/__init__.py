"""Compression- and hit-count-based similarity toolkit."""

from ._kcsim import (  # noqa: F401
    BitString,
    CompressedForm,
    HitCounts,
    HitTable,
    CorpusIndex,
    KeyDictionary,
    KeySharing,
    KcsimError,
    approx_complexity,
    categorize,
    check_similarity_axioms,
    compress,
    compress_conditional,
    compress_declared,
    decompress,
    dice_similarity,
    information_distance,
    keys_of,
    metric_m,
    ncd,
    ngd,
    nid,
    nsd,
    shared_information,
)

__all__ = [name for name in dir() if not name.startswith("_")]
