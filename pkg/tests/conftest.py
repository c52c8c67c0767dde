import numpy as np

from wtbc.probability import Alphabet, BroadcastChannel, compose
from wtbc.regions import template_symbols
from wtbc.search import _build_joint, _stages, chain_labels, evaluate_symbols


def random_info_values(template: str, seed, x_size: int = 2) -> dict:
    """Info-symbol values realized by a random auxiliary chain and channel.

    Unlike independent uniform draws, these are entropically consistent, so
    identities that hold for genuine mutual informations (submodularity,
    chain-rule relations between the symbols) are respected.
    """
    rng = np.random.default_rng(seed)
    labels = chain_labels(template)
    sizes = {lbl: 2 for lbl in labels}
    sizes["X"] = x_size
    stages = _stages(labels)
    conds = []
    for new, parents in stages:
        rows = int(np.prod([sizes[lbl] for lbl in parents])) if parents else 1
        k = int(np.prod([sizes[lbl] for lbl in new]))
        conds.append(rng.dirichlet(np.ones(k), size=rows))
    joint = _build_joint(stages, sizes, conds)
    t = rng.dirichlet(np.ones(8), size=x_size).reshape(x_size, 2, 2, 2)
    ch = BroadcastChannel(Alphabet(x_size, "X"),
                          (Alphabet(2, "Y1"), Alphabet(2, "Y2"), Alphabet(2, "Z")), t)
    full = compose(joint, ch)
    return evaluate_symbols(full, template_symbols(template))
