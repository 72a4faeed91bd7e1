import typing

import numpy as np

__all__ = ("IqBuffer",)


class IqBuffer:
	"""Complex baseband samples together with their sample rate"""

	__slots__ = ("samples", "rate")

	def __init__(self, samples: typing.Union[np.ndarray, typing.Sequence[complex]], rate: float) -> None:
		if not rate > 0:
			raise ValueError("Sample rate must be positive", rate)
		self.samples = np.asarray(samples, dtype=np.complex128).reshape(-1)
		self.rate = rate

	def __len__(self) -> int:
		return len(self.samples)

	@property
	def count(self) -> int:
		return len(self.samples)

	@property
	def duration(self) -> float:
		return len(self.samples) / self.rate

	def __getitem__(self, k: slice) -> "IqBuffer":
		if not isinstance(k, slice):
			raise TypeError("Only slices of IqBuffer are IqBuffers, index `samples` for single samples", k)
		return self.__class__(self.samples[k], self.rate)

	def withSamples(self, samples: np.ndarray) -> "IqBuffer":
		return self.__class__(samples, self.rate)

	def __repr__(self):
		return self.__class__.__name__ + "(<" + str(len(self)) + " samples>, rate=" + repr(self.rate) + ")"
