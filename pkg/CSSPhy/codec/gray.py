import numpy as np

__all__ = ("grayIndex", "grayDeindex", "grayIndexArray", "grayDeindexArray")


def _checkWord(w: int, sf: int) -> int:
	w = int(w)
	if not 0 <= w < (1 << sf):
		raise ValueError("Value out of range for this spreading factor", w, sf)
	return w


def grayIndex(word: int, sf: int) -> int:
	"""Binary-reflected Gray code"""
	word = _checkWord(word, sf)
	return word ^ (word >> 1)


def grayDeindex(symbol: int, sf: int) -> int:
	res = _checkWord(symbol, sf)
	shift = res >> 1
	while shift:
		res ^= shift
		shift >>= 1
	return res


def grayIndexArray(words: np.ndarray) -> np.ndarray:
	words = np.asarray(words, dtype=np.int64)
	return words ^ (words >> 1)


def grayDeindexArray(symbols: np.ndarray) -> np.ndarray:
	res = np.asarray(symbols, dtype=np.int64).copy()
	shift = res >> 1
	while shift.any():
		res ^= shift
		shift >>= 1
	return res
