"""
instanton-calculus - exact computations with sharp instanton knot invariants.

This package provides surgery-dimension formulas, concordance-sum rules,
a forward-chaining inference engine over partial knot records, exact
verification of the binomial linear algebra behind the parity of nu-sharp,
and a Z/4-graded exact-triangle constraint solver.
"""

__version__ = "0.3.0"
__author__ = "Israel Barragan"
__email__ = "abraham0vidal@gmail.com"


def get_version() -> str:
    """Get the current version of instanton_calculus."""
    return __version__


def get_package_info() -> dict[str, str]:
    """Get package information including name and version."""
    return {
        "name": "instanton-calculus",
        "version": __version__,
        "description": "Exact calculus of sharp instanton knot invariants",
    }


__all__ = ["__version__", "__author__", "__email__", "get_version", "get_package_info"]
