"""Simulator config files.

One mapping with the optional sections `params`, `frame`, `channel`, `receiver` and `sweep`; docs/cli.md has the schema.
Every problem is reported as `ConfigError` whose first argument is the dotted key of the offending entry.
"""

import math
import os
import typing
from pathlib import Path
from warnings import warn

from ..ber import DEFAULT_MAX_FRAMES, DEFAULT_MIN_BIT_ERRORS, SweepSpec
from ..ber.modes import ReceiverMode, receiverModeFromName, receiverModeNames
from ..channel import ChannelImpairments
from ..codec.hamming import CODE_RATES
from ..core.demodulator import DemodMethod
from ..core.errors import ConfigError
from ..core.params import ALLOWED_BW, ALLOWED_SF, DEFAULT_N_PRE, LoraParams
from ..framing import FrameConfig
from ..receiver import ReceiverConfig
from .decodeExtension import serializerForPath

__all__ = ("SimulatorConfig", "SweepConfig", "parseConfig", "parseConfigFile", "configToDict", "saveConfigFile", "SEED_ENV_VAR")

SEED_ENV_VAR = "CSSPHY_SEED"


class SweepConfig:
	__slots__ = ("mode", "snrPoints", "frameLenSymbols", "minBitErrors", "maxFrames", "seed", "workers")

	def __init__(self, mode: ReceiverMode = ReceiverMode.alignedNoComp, snrPoints: typing.Sequence[float] = (0.0,), frameLenSymbols: int = 32, minBitErrors: int = DEFAULT_MIN_BIT_ERRORS, maxFrames: int = DEFAULT_MAX_FRAMES, seed: int = 0, workers: int = 1) -> None:
		self.mode = mode
		self.snrPoints = tuple(snrPoints)
		self.frameLenSymbols = frameLenSymbols
		self.minBitErrors = minBitErrors
		self.maxFrames = maxFrames
		self.seed = seed
		self.workers = workers

	def __repr__(self):
		return self.__class__.__name__ + "(" + ", ".join(k + "=" + repr(getattr(self, k)) for k in __class__.__slots__) + ")"  # pylint:disable=undefined-variable


class SimulatorConfig:
	__slots__ = ("params", "frame", "channel", "receiver", "sweep")

	def __init__(self, params: typing.Optional[LoraParams] = None, frame: typing.Optional[FrameConfig] = None, channel: typing.Optional[ChannelImpairments] = None, receiver: typing.Optional[ReceiverConfig] = None, sweep: typing.Optional[SweepConfig] = None) -> None:
		self.params = params if params is not None else LoraParams(8, 125000)
		self.frame = frame if frame is not None else FrameConfig()
		self.channel = channel if channel is not None else ChannelImpairments()
		self.receiver = receiver if receiver is not None else ReceiverConfig()
		self.sweep = sweep if sweep is not None else SweepConfig()

	def sweepSpec(self) -> SweepSpec:
		"""The BER sweep this config describes. `channel.snrDb` is ignored: the sweep supplies the SNR."""
		try:
			return SweepSpec(
				self.params,
				cr=self.frame.cr,
				frameLenSymbols=self.sweep.frameLenSymbols,
				snrPoints=self.sweep.snrPoints,
				impairments=self.channel,
				receiverMode=self.sweep.mode,
				minBitErrors=self.sweep.minBitErrors,
				maxFrames=self.sweep.maxFrames,
				seed=self.sweep.seed,
				threshold=self.receiver.threshold,
				demod=self.receiver.demod,
				syncWord=self.frame.syncWord,
			)
		except ValueError as ex:
			raise ConfigError("sweep", *ex.args) from ex

	def __repr__(self):
		return self.__class__.__name__ + "(" + ", ".join(k + "=" + repr(getattr(self, k)) for k in __class__.__slots__) + ")"  # pylint:disable=undefined-variable


def _int(v: typing.Any) -> int:
	if isinstance(v, bool) or not isinstance(v, (int, float)) or v != int(v):
		raise ValueError("must be an integer", v)
	return int(v)


def _float(v: typing.Any) -> float:
	if isinstance(v, bool) or not isinstance(v, (int, float)):
		raise ValueError("must be a number", v)
	return float(v)


def _bool(v: typing.Any) -> bool:
	if not isinstance(v, bool):
		raise ValueError("must be true or false", v)
	return v


def _optional(conv: typing.Callable[[typing.Any], typing.Any]) -> typing.Callable[[typing.Any], typing.Any]:
	def convOptional(v):
		if v is None:
			return None
		return conv(v)

	return convOptional


def _oneOf(conv: typing.Callable[[typing.Any], typing.Any], allowed: typing.Container) -> typing.Callable[[typing.Any], typing.Any]:
	def convOneOf(v):
		v = conv(v)
		if v not in allowed:
			raise ValueError("must be one of " + ", ".join(str(a) for a in allowed), v)
		return v

	return convOneOf


def _atLeast(conv: typing.Callable[[typing.Any], typing.Any], lowest) -> typing.Callable[[typing.Any], typing.Any]:
	def convAtLeast(v):
		v = conv(v)
		if v < lowest:
			raise ValueError("must be at least " + str(lowest), v)
		return v

	return convAtLeast


def _complex(v: typing.Any) -> complex:
	if isinstance(v, (list, tuple)):
		if len(v) != 2:
			raise ValueError("must be [re, im]", v)
		return complex(_float(v[0]), _float(v[1]))
	return complex(_float(v))


def _syncWord(v: typing.Any) -> typing.Tuple[int, int]:
	if not isinstance(v, (list, tuple)) or len(v) != 2:
		raise ValueError("must be a list of 2 symbols", v)
	res = tuple(_int(s) for s in v)
	if res[0] < 2:
		raise ValueError("first symbol must be at least 2", v)
	return res


def _snrPoints(v: typing.Any) -> typing.Tuple[float, ...]:
	if not isinstance(v, (list, tuple)) or not v:
		raise ValueError("must be a non-empty list of numbers", v)
	return tuple(_float(s) for s in v)


def _demod(v: typing.Any) -> DemodMethod:
	try:
		return DemodMethod[v]
	except KeyError:
		raise ValueError("must be one of " + ", ".join(DemodMethod.__members__), v) from None


def _mode(v: typing.Any) -> ReceiverMode:
	try:
		return receiverModeFromName(v)
	except KeyError:
		raise ValueError("must be one of " + ", ".join(receiverModeNames.values()), v) from None


_nonNegativeInt = _atLeast(_int, 0)
_seed = _nonNegativeInt
_positiveInt = _atLeast(_int, 1)

# section -> key -> converter
SCHEMA = {
	"params": {
		"sf": _oneOf(_int, ALLOWED_SF),
		"bw": _oneOf(_int, ALLOWED_BW),
		"os": _positiveInt,
		"nPre": _atLeast(_int, 2),
	},
	"frame": {
		"cr": _oneOf(_int, CODE_RATES),
		"hasHeader": _bool,
		"hasCrc": _bool,
		"syncWord": _syncWord,
	},
	"channel": {
		"snrDb": _optional(_float),
		"h": _complex,
		"cfoHz": _float,
		"sfoHz": _float,
		"delaySamples": _nonNegativeInt,
		"seed": _seed,
	},
	"receiver": {
		"demod": _demod,
		"threshold": _optional(_atLeast(_float, 0.0)),
		"cfoCompensation": _bool,
		"sfoRealign": _bool,
		"sfoHz": _float,
	},
	"sweep": {
		"mode": _mode,
		"snrPoints": _snrPoints,
		"frameLenSymbols": _positiveInt,
		"minBitErrors": _positiveInt,
		"maxFrames": _positiveInt,
		"seed": _seed,
		"workers": _positiveInt,
	},
}


def _parseSection(name: str, section: typing.Any) -> typing.Dict[str, typing.Any]:
	if section is None:
		return {}
	if not isinstance(section, typing.Mapping):
		raise ConfigError(name, "section must be a mapping", section)
	fields = SCHEMA[name]
	res = {}
	for k, v in section.items():
		key = name + "." + str(k)
		conv = fields.get(k, None)
		if conv is None:
			warn("Unknown config key " + key + ", ignored")
			continue
		try:
			res[k] = conv(v)
		except (ValueError, TypeError, OverflowError) as ex:
			raise ConfigError(key, *ex.args) from ex
	return res


def _build(name: str, ctor: typing.Callable, kwargs: typing.Dict[str, typing.Any]) -> typing.Any:
	try:
		return ctor(**kwargs)
	except ValueError as ex:
		raise ConfigError(name, *ex.args) from ex


def _seedFromEnvironment() -> typing.Optional[int]:
	v = os.environ.get(SEED_ENV_VAR, None)
	if v is None or not v.strip():
		return None
	try:
		return _seed(int(v.strip(), 0))
	except ValueError as ex:
		raise ConfigError(SEED_ENV_VAR, "must be a non-negative integer", v) from ex


def parseConfig(dic: typing.Optional[typing.Mapping[str, typing.Any]]) -> SimulatorConfig:
	"""Validates a parsed config mapping. `CSSPHY_SEED` in the environment replaces both `sweep.seed` and `channel.seed`."""
	if dic is None:
		dic = {}
	if not isinstance(dic, typing.Mapping):
		raise ConfigError("", "config must be a mapping", dic)

	for k in dic:
		if k not in SCHEMA:
			warn("Unknown config section " + str(k) + ", ignored")

	sections = {name: _parseSection(name, dic.get(name, None)) for name in SCHEMA}

	envSeed = _seedFromEnvironment()
	if envSeed is not None:
		sections["sweep"]["seed"] = envSeed
		sections["channel"]["seed"] = envSeed

	params = sections["params"]
	params = _build("params", LoraParams, {"sf": params.get("sf", 8), "bw": params.get("bw", 125000), "os": params.get("os", 1), "nPre": params.get("nPre", DEFAULT_N_PRE)})
	frame = _build("frame", FrameConfig, sections["frame"])
	for i, s in enumerate(frame.syncWord):
		if s >= params.chips:
			raise ConfigError("frame.syncWord", "symbol " + str(i) + " does not fit the spreading factor", s)

	return SimulatorConfig(
		params=params,
		frame=frame,
		channel=_build("channel", ChannelImpairments, sections["channel"]),
		receiver=_build("receiver", ReceiverConfig, sections["receiver"]),
		sweep=_build("sweep", SweepConfig, sections["sweep"]),
	)


def parseConfigFile(path: Path) -> SimulatorConfig:
	path = Path(path)
	try:
		serializer = serializerForPath(path)
	except ValueError as ex:
		raise ConfigError("", *ex.args) from ex
	text = path.read_text(encoding="utf-8")
	try:
		dic = serializer.process(text)
	except ValueError as ex:
		raise ConfigError("", "cannot parse " + str(path), str(ex)) from ex
	return parseConfig(dic)


def _finiteOrNone(v: float) -> typing.Optional[float]:
	return None if math.isinf(v) else v


def configToDict(cfg: SimulatorConfig) -> typing.Dict[str, typing.Dict[str, typing.Any]]:
	ch = cfg.channel
	rx = cfg.receiver
	sw = cfg.sweep
	return {
		"params": cfg.params.toDict(),
		"frame": {
			"cr": cfg.frame.cr,
			"hasHeader": cfg.frame.hasHeader,
			"hasCrc": cfg.frame.hasCrc,
			"syncWord": list(cfg.frame.syncWord),
		},
		"channel": {
			"snrDb": _finiteOrNone(ch.snrDb),
			"h": [ch.h.real, ch.h.imag],
			"cfoHz": ch.cfoHz,
			"sfoHz": ch.sfoHz,
			"delaySamples": ch.delaySamples,
			"seed": ch.seed,
		},
		"receiver": {
			"demod": rx.demod.name,
			"threshold": rx.threshold,
			"cfoCompensation": rx.cfoCompensation,
			"sfoRealign": rx.sfoRealign,
			"sfoHz": rx.sfoHz,
		},
		"sweep": {
			"mode": receiverModeNames[sw.mode],
			"snrPoints": list(sw.snrPoints),
			"frameLenSymbols": sw.frameLenSymbols,
			"minBitErrors": sw.minBitErrors,
			"maxFrames": sw.maxFrames,
			"seed": sw.seed,
			"workers": sw.workers,
		},
	}


def saveConfigFile(cfg: SimulatorConfig, path: Path) -> None:
	path = Path(path)
	serializer = serializerForPath(path)
	path.write_text(serializer.unprocess(configToDict(cfg)), encoding="utf-8")
