import hashlib


def derive_seed(master: int, stage: str) -> int:
    """
    Per-stage seed from the master seed: first 8 bytes of SHA-256("<master>:<stage>"), 63 bits.

    :param master: run seed
    :param stage: stage name such as 'init', 'chain-0' or 'layout'
    :return: non-negative integer seed
    """
    digest = hashlib.sha256('{}:{}'.format(master, stage).encode('utf-8')).digest()
    return int.from_bytes(digest[:8], 'big') & ((1 << 63) - 1)
