import logging

from django.dispatch import Signal, receiver


logger = logging.getLogger(__name__)

# Sent by a propagator when a domain wipes out; kwargs: constraint, weight.
wipeout = Signal()


@receiver(wipeout)
def log_wipeout(sender, constraint, weight, **kwargs):
    logger.debug(f"Wipeout on constraint {constraint}, weight now {weight}")
