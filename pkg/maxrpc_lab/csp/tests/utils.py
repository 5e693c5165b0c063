from csp.network import ConstraintNetwork, network_from_pairs
from csp.relations import compare, conflicts, supports
from csp.session import Session
from instances.generators import random_suite


def neq_triangle(d=2):
    return network_from_pairs(3, d, [(0, 1, compare("ne")), (1, 2, compare("ne")), (0, 2, compare("ne"))], name="neq-triangle")


def eq_triangle(d=2):
    return network_from_pairs(3, d, [(0, 1, compare("eq")), (1, 2, compare("eq")), (0, 2, compare("eq"))], name="eq-triangle")


def lt_chain(d=3):
    return network_from_pairs(3, d, [(0, 1, compare("lt")), (1, 2, compare("lt"))], name="lt-chain")


def pc_gap():
    """
    AC everywhere, but x0=0 has no PC-support on (x0, x1): its only support
    x1=0 has no common neighbour in x2.
    """
    return network_from_pairs(
        3,
        2,
        [
            (0, 1, supports([(0, 0), (1, 1), (1, 0)])),
            (0, 2, supports([(0, 0), (1, 1)])),
            (1, 2, conflicts([(0, 0)])),
        ],
        name="pc-gap",
    )


def suite_networks(count, seed=0):
    return [doc.to_network() for doc in random_suite(count, seed=seed)]


def preprocess(network, config):
    session = Session(network, config)
    consistent = session.preprocess()
    return session, consistent


def witness_clique():
    """
    4-clique w, x, y, z over {0, 1}. (w=0, z=0) has y=0 as its only
    PC-witness in y, and z=1 is no PC-support for w=0 because x has no
    witness for it. Nothing is pruned at the root.
    """
    everything = supports([(0, 0), (0, 1), (1, 0), (1, 1)])
    return network_from_pairs(
        4,
        2,
        [
            (0, 1, supports([(0, 0), (1, 0), (1, 1)])),
            (0, 2, everything),
            (0, 3, everything),
            (1, 2, everything),
            (1, 3, supports([(0, 0), (1, 0), (1, 1)])),
            (2, 3, supports([(0, 0), (1, 1)])),
        ],
        name="witness-clique",
    )
