import typing

import numpy as np

__all__ = ("asBits", "bytesToBits", "bitsToBytes", "wordsToBits", "bitsToWords", "padBits")


def asBits(bits: typing.Iterable[int]) -> np.ndarray:
	bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
	if bits.size and bits.max() > 1:
		raise ValueError("Bits must be 0 or 1")
	return bits


def bytesToBits(data: bytes) -> np.ndarray:
	"""Bits of each byte, LSB first"""
	return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8), bitorder="little")


def bitsToBytes(bits: np.ndarray) -> bytes:
	bits = asBits(bits)
	if len(bits) % 8:
		raise ValueError("Bit count is not a multiple of 8", len(bits))
	return np.packbits(bits, bitorder="little").tobytes()


def wordsToBits(words: typing.Iterable[int], width: int) -> np.ndarray:
	"""(count, width) matrix of the bits of the words, LSB first"""
	words = np.asarray(words, dtype=np.int64).reshape(-1, 1)
	return ((words >> np.arange(width)) & 1).astype(np.uint8)


def bitsToWords(bits: np.ndarray) -> np.ndarray:
	bits = np.asarray(bits, dtype=np.int64)
	return bits @ (1 << np.arange(bits.shape[-1], dtype=np.int64))


def padBits(bits: np.ndarray, multiple: int) -> np.ndarray:
	"""Zero-pads to a whole number of `multiple`s"""
	bits = asBits(bits)
	rest = -len(bits) % multiple
	if not rest:
		return bits
	return np.concatenate((bits, np.zeros(rest, dtype=np.uint8)))
