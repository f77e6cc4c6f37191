"""Erasure decoding of convolutional codes through their input-state-output representation."""

from __future__ import annotations

__version__ = "0.1.0"
