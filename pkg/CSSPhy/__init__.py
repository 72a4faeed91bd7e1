"""CSSPhy is a chirp-spread-spectrum (LoRa) PHY transceiver with a channel simulator and a Monte-Carlo BER harness"""

import typing

from .channel import ChannelImpairments, applyImpairments
from .core import *
from .core.demodulator import DemodMethod, DemodResult, demodDft, demodMatchedFilter, demodSymbols
from .core.modulator import genDownchirp, genSymbol, genUpchirp, modulateSymbols
from .framing import Frame, FrameConfig, buildFrame, frameSegments, frameSymbols
from .receiver import ReceivedFrame, ReceiverConfig, receiveFrame


def modulateFrame(payload: bytes, params: LoraParams, frameCfg: typing.Optional[FrameConfig] = None, impairments: typing.Optional[ChannelImpairments] = None) -> IqBuffer:
	"""Builds the frame carrying `payload`; `frameCfg.payloadLen` is taken from the payload. With `impairments` the frame is passed through the simulated channel."""
	payload = bytes(payload)
	if frameCfg is None:
		frameCfg = FrameConfig()
	frame = Frame(payload, frameCfg.replace(payloadLen=len(payload)))
	if impairments is None:
		return buildFrame(frame, params)
	return applyImpairments(frameSegments(frameSymbols(frame, params), params, frameCfg.syncWord), params, impairments)


def decodeStream(stream: IqBuffer, params: LoraParams, frameCfg: typing.Optional[FrameConfig] = None, rxCfg: typing.Optional[ReceiverConfig] = None) -> ReceivedFrame:
	"""Finds and decodes the first frame of the stream. Raises `PreambleNotFoundError` or `HeaderError`; a CRC mismatch is only flagged in the result."""
	if frameCfg is None:
		frameCfg = FrameConfig()
	return receiveFrame(stream, params, frameCfg, rxCfg)
