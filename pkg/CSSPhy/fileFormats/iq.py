"""IQ capture files: a 32-byte little-endian header followed by interleaved complex float32 samples.

Header layout: magic (8 bytes), version (u16), format tag (u16), reserved (u32), sample rate in Hz (f64), sample count (u64).
Headerless raw files (as written by most SDR tools) hold the samples alone, their rate is supplied by the caller.
"""

import struct
import typing
from enum import IntEnum
from pathlib import Path

import numpy as np

from ..core.errors import IqFileFormatError
from ..core.iqBuffer import IqBuffer

__all__ = ("IqFileHeader", "IqSampleFormat", "IQ_MAGIC", "IQ_VERSION", "readIqFile", "writeIqFile", "parseIq", "serializeIq")

IQ_MAGIC = b"CSSIQ\0\0\0"
IQ_VERSION = 1
HEADER_STRUCT = struct.Struct("<8sHHIdQ")
SAMPLE_DTYPE = np.dtype("<c8")


class IqSampleFormat(IntEnum):
	complexFloat32LE = 1


class IqFileHeader:
	__slots__ = ("version", "sampleFormat", "rate", "count")

	SIZE = HEADER_STRUCT.size

	def __init__(self, rate: float, count: int, version: int = IQ_VERSION, sampleFormat: IqSampleFormat = IqSampleFormat.complexFloat32LE) -> None:
		self.version = version
		self.sampleFormat = sampleFormat
		self.rate = rate
		self.count = count

	def pack(self) -> bytes:
		return HEADER_STRUCT.pack(IQ_MAGIC, self.version, self.sampleFormat, 0, self.rate, self.count)

	@classmethod
	def unpack(cls, data: bytes) -> "IqFileHeader":
		if len(data) < cls.SIZE:
			raise IqFileFormatError("Truncated header", len(data))
		magic, version, fmt, _reserved, rate, count = HEADER_STRUCT.unpack_from(data)
		if magic != IQ_MAGIC:
			raise IqFileFormatError("Bad magic, not an IQ file of this format (use raw mode for headerless captures)", magic)
		if version != IQ_VERSION:
			raise IqFileFormatError("Unsupported version", version)
		try:
			fmt = IqSampleFormat(fmt)
		except ValueError:
			raise IqFileFormatError("Unsupported sample format", fmt) from None
		if not rate > 0:
			raise IqFileFormatError("Sample rate must be positive", rate)
		return cls(rate, count, version, fmt)

	def __repr__(self):
		return self.__class__.__name__ + "(" + ", ".join(k + "=" + repr(getattr(self, k)) for k in __class__.__slots__) + ")"  # pylint:disable=undefined-variable


def serializeIq(buf: IqBuffer, raw: bool = False) -> bytes:
	body = buf.samples.astype(SAMPLE_DTYPE).tobytes()
	if raw:
		return body
	return IqFileHeader(float(buf.rate), len(buf)).pack() + body


def parseIq(data: bytes, raw: bool = False, rate: typing.Optional[float] = None) -> IqBuffer:
	if raw:
		if rate is None:
			raise IqFileFormatError("Raw captures need the sample rate to be given")
		if len(data) % SAMPLE_DTYPE.itemsize:
			raise IqFileFormatError("Raw capture size is not a whole number of complex float32 samples", len(data))
		return IqBuffer(np.frombuffer(data, dtype=SAMPLE_DTYPE), rate)

	header = IqFileHeader.unpack(data)
	body = data[IqFileHeader.SIZE :]
	expected = header.count * SAMPLE_DTYPE.itemsize
	if len(body) != expected:
		raise IqFileFormatError("Sample count in the header does not match the body", header.count, len(body) // SAMPLE_DTYPE.itemsize)
	if rate is not None and rate != header.rate:
		raise IqFileFormatError("Sample rate in the file differs from the expected one", header.rate, rate)
	return IqBuffer(np.frombuffer(body, dtype=SAMPLE_DTYPE), header.rate)


def writeIqFile(path: Path, buf: IqBuffer, raw: bool = False) -> None:
	Path(path).write_bytes(serializeIq(buf, raw))


def readIqFile(path: Path, raw: bool = False, rate: typing.Optional[float] = None) -> IqBuffer:
	return parseIq(Path(path).read_bytes(), raw, rate)
