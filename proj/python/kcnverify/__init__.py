"""Pointwise verification of Kahler-compatible Nijenhuis structures.

Thin wrapper over the C++ extension module; see the package README for the
definition-file format and check semantics.
"""

try:
    from ._kcnverify import (  # type: ignore[attr-defined]
        KcnError,
        builtin_definition,
        builtin_expectations,
        check_builtin,
        check_json,
        check_text,
        eval_jet2,
        list_builtins,
        parse_expression,
    )
except ImportError:  # extension built in-tree, not installed as a package
    from _kcnverify import (  # type: ignore[no-redef]
        KcnError,
        builtin_definition,
        builtin_expectations,
        check_builtin,
        check_json,
        check_text,
        eval_jet2,
        list_builtins,
        parse_expression,
    )

__all__ = [
    "KcnError",
    "builtin_definition",
    "builtin_expectations",
    "check_builtin",
    "check_json",
    "check_text",
    "eval_jet2",
    "list_builtins",
    "parse_expression",
]
