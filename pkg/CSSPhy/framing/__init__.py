"""Frames: preamble, delimiters, optional header, payload and optional CRC. The byte layout is documented in docs/frame-format.md."""

import typing
from warnings import warn

import numpy as np

from ..codec import rxChain, symbolCount, txChain
from ..codec.bits import bitsToBytes, bytesToBits
from ..codec.hamming import checkCodeRate
from ..core.errors import DecodeError
from ..core.iqBuffer import IqBuffer
from ..core.modulator import ChirpDirection, ChirpSegment, checkSymbol, synthesizeSegments
from ..core.params import LoraParams
from .crc import CRC_BYTES, crcBytes
from .header import PhyHeader, headerSymbolCount

__all__ = ("DEFAULT_SYNC_WORD", "FrameConfig", "Frame", "buildFrame", "parseFrame", "frameSymbols", "frameSegments", "delimiterSegments", "preambleAndDelimiterSamples", "payloadSymbolCount", "dataSymbolCount", "PhyHeader")

DEFAULT_SYNC_WORD = (0x18, 0x10)
SYNC_WORD_SYMBOLS = 2
FULL_DOWNCHIRPS = 2


class FrameConfig:
	"""What the receiver must know about a frame. Without a header `cr`, `payloadLen` and `hasCrc` are agreed out of band."""

	__slots__ = ("hasHeader", "hasCrc", "cr", "payloadLen", "syncWord")

	def __init__(self, hasHeader: bool = True, hasCrc: bool = True, cr: int = 4, payloadLen: int = 0, syncWord: typing.Tuple[int, int] = DEFAULT_SYNC_WORD) -> None:
		if payloadLen < 0:
			raise ValueError("Payload length must be non-negative", payloadLen)
		syncWord = tuple(int(s) for s in syncWord)
		if len(syncWord) != SYNC_WORD_SYMBOLS:
			raise ValueError("Sync word is exactly 2 symbols", syncWord)
		if syncWord[0] < 2:
			raise ValueError("The first sync word symbol must differ from the preamble by more than one bin", syncWord)

		self.hasHeader = bool(hasHeader)
		self.hasCrc = bool(hasCrc)
		self.cr = checkCodeRate(cr)
		self.payloadLen = payloadLen
		self.syncWord = syncWord

	def replace(self, **kwargs) -> "FrameConfig":
		dic = {k: getattr(self, k) for k in __class__.__slots__}  # pylint:disable=undefined-variable
		dic.update(kwargs)
		return self.__class__(**dic)

	def __eq__(self, other) -> bool:
		return isinstance(other, __class__) and all(getattr(self, k) == getattr(other, k) for k in __class__.__slots__)  # pylint:disable=undefined-variable

	def __repr__(self):
		return self.__class__.__name__ + "(" + ", ".join(k + "=" + repr(getattr(self, k)) for k in __class__.__slots__) + ")"  # pylint:disable=undefined-variable


class Frame:
	__slots__ = ("payload", "config")

	def __init__(self, payload: bytes, config: typing.Optional[FrameConfig] = None) -> None:
		payload = bytes(payload)
		if config is None:
			config = FrameConfig(payloadLen=len(payload))
		elif config.payloadLen != len(payload):
			raise ValueError("Payload length does not match the frame config", len(payload), config.payloadLen)
		self.payload = payload
		self.config = config

	def __eq__(self, other) -> bool:
		return isinstance(other, __class__) and self.payload == other.payload and self.config == other.config  # pylint:disable=undefined-variable

	def __repr__(self):
		return self.__class__.__name__ + "(" + repr(self.payload) + ", " + repr(self.config) + ")"


def _payloadBytesOnAir(cfg: FrameConfig) -> int:
	return cfg.payloadLen + (CRC_BYTES if cfg.hasCrc else 0)


def payloadSymbolCount(cfg: FrameConfig, sf: int) -> int:
	"""Symbols carrying payload and CRC"""
	return symbolCount(8 * _payloadBytesOnAir(cfg), sf, cfg.cr)


def dataSymbolCount(cfg: FrameConfig, sf: int) -> int:
	"""All symbols after the delimiter"""
	return (headerSymbolCount(sf) if cfg.hasHeader else 0) + payloadSymbolCount(cfg, sf)


def frameSymbols(frame: Frame, params: LoraParams) -> np.ndarray:
	"""Symbols following the delimiter: header symbols, if any, then payload and CRC"""
	cfg = frame.config
	onAir = frame.payload + (crcBytes(frame.payload) if cfg.hasCrc else b"")
	parts = []
	if cfg.hasHeader:
		parts.append(PhyHeader(cfg.payloadLen, cfg.cr, cfg.hasCrc).encode(params))
	parts.append(txChain(bytesToBits(onAir), params, cfg.cr))
	return np.concatenate(parts)


def delimiterSegments(params: LoraParams, syncWord: typing.Tuple[int, int] = DEFAULT_SYNC_WORD) -> typing.List[ChirpSegment]:
	"""Preamble upchirps, the sync word and 2.25 downchirps"""
	res = [ChirpSegment(0) for _ in range(params.nPre)]
	res.extend(ChirpSegment(checkSymbol(s, params.sf)) for s in syncWord)
	res.extend(ChirpSegment(0, ChirpDirection.down) for _ in range(FULL_DOWNCHIRPS))
	res.append(ChirpSegment(0, ChirpDirection.down, params.chips // 4))
	return res


def frameSegments(dataSymbols: typing.Iterable[int], params: LoraParams, syncWord: typing.Tuple[int, int] = DEFAULT_SYNC_WORD) -> typing.List[ChirpSegment]:
	return delimiterSegments(params, syncWord) + [ChirpSegment(checkSymbol(s, params.sf)) for s in dataSymbols]


def preambleAndDelimiterSamples(params: LoraParams) -> int:
	"""Offset of the first data symbol from the frame start: (n_pre + 4.25) symbols"""
	return (params.nPre + SYNC_WORD_SYMBOLS + FULL_DOWNCHIRPS) * params.samplesPerSymbol + params.samplesPerSymbol // 4


def buildFrame(frame: Frame, params: LoraParams) -> IqBuffer:
	return synthesizeSegments(frameSegments(frameSymbols(frame, params), params, frame.config.syncWord), params)


def parseFrame(symbols: typing.Sequence[int], cfg: FrameConfig, params: LoraParams) -> typing.Tuple[Frame, bool]:
	"""Decodes the symbols following the delimiter. The header, when present, overrides `cfg`. A CRC mismatch is reported in the returned flag."""
	symbols = np.asarray(symbols, dtype=np.int64).reshape(-1)
	if cfg.hasHeader:
		hCount = headerSymbolCount(params.sf)
		if len(symbols) < hCount:
			raise DecodeError("Too few symbols for the header", len(symbols))
		header = PhyHeader.decode(symbols[:hCount], params)
		cfg = cfg.replace(payloadLen=header.payloadLen, cr=header.cr, hasCrc=header.hasCrc)
		symbols = symbols[hCount:]

	count = payloadSymbolCount(cfg, params.sf)
	if len(symbols) < count:
		raise DecodeError("Too few symbols for the payload", len(symbols), count)

	onAirLen = _payloadBytesOnAir(cfg)
	bits, _corrected, uncorrectable = rxChain(symbols[:count], params, cfg.cr, 8 * onAirLen)
	if uncorrectable:
		warn("Payload contains codewords with uncorrectable errors")

	onAir = bitsToBytes(bits)
	payload = onAir[: cfg.payloadLen]
	crcOk = True
	if cfg.hasCrc:
		crcOk = onAir[cfg.payloadLen :] == crcBytes(payload)
	return Frame(payload, cfg), crcOk
