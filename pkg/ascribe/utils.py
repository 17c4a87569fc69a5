from ascribe._src.utils.testing import (
    random_term,
    random_proposition,
    random_formula,
    random_store,
    random_domain,
    apply_operator,
    execute,
    linearizations,
    check_plan,
    bfs_plan,
)

__all__ = [
    "random_term",
    "random_proposition",
    "random_formula",
    "random_store",
    "random_domain",
    "apply_operator",
    "execute",
    "linearizations",
    "check_plan",
    "bfs_plan",
]
