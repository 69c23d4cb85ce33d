"""Linear-time LZ78 factorization and position-heap construction over suffix trees."""
from ._impl import AVAILABLE, DEFAULT_IMPL
from .cst import (
    CommonSuffixTrie,
    SuffixOrder,
    cst_from_strings,
    gst_bridge,
    naive_suffix_order,
    order_suffixes,
    parse_cst,
)
from .errors import *  # noqa: F401,F403
from .io_formats import (
    read_cst,
    read_factors,
    write_cst,
    write_factors,
    write_heap,
    write_trie_dot,
)
from .lz78 import (
    LZ78Factorization,
    LZ78Trie,
    check_factorization,
    decode,
    extract_trie,
    factorize,
    factorize_bytes,
    naive_factorize,
)
from .marked_ancestor import NaiveMarkedIndex, new_marked_index
from .position_heap import PositionHeap, build_position_heap, naive_build, verify_heap
from .suffix_index import (
    SuffixTree,
    build_generalized_suffix_tree,
    build_lcp,
    build_suffix_array,
    build_suffix_tree,
)
from .text import SENTINEL, Text, decode_text, encode_text
from .tree_queries import RootedTree, child_toward, level_ancestor, preprocess_level_ancestor

__version__ = "0.1.0"
