from channel.awgn import (
    GAUSSIAN_METHOD,
    ChannelConfig,
    llr,
    modulate,
    q_function,
    sigma_from_ebn0,
    standard_normal,
    transmit,
    uncoded_ber,
)

__all__ = [
    "GAUSSIAN_METHOD",
    "ChannelConfig",
    "llr",
    "modulate",
    "q_function",
    "sigma_from_ebn0",
    "standard_normal",
    "transmit",
    "uncoded_ber",
]
