"""Built-in sweeps: receiver robustness to a constant CFO and to an SFO, SF 8 with the (8, 4) Hamming code"""

import typing
from pathlib import Path

from ..channel import ChannelImpairments
from ..core.params import makeParams
from .csvFormat import writeBerCsv
from .modes import ReceiverMode
from . import BerRecord, DEFAULT_MAX_FRAMES, DEFAULT_MIN_BIT_ERRORS, SweepSpec, iterSweep

__all__ = ("CFO_EXPERIMENT_CFOS", "CFO_EXPERIMENT_MODES", "SFO_EXPERIMENT_SFOS", "SFO_EXPERIMENT_RECEIVERS", "SFO_FRAME_LENGTHS", "cfoExperimentSpecs", "sfoExperimentSpecs", "replicateCfoExperiment", "replicateSfoExperiment", "runSpecs", "DEFAULT_SEED")

DEFAULT_SEED = 1
EXPERIMENT_SF = 8
EXPERIMENT_CR = 4

CFO_EXPERIMENT_BW = 125000
CFO_EXPERIMENT_CFOS = (10e3, 10.1e3)
CFO_EXPERIMENT_MODES = (ReceiverMode.alignedNoComp, ReceiverMode.timeoffsetSync, ReceiverMode.timeoffsetSyncCfoComp)
CFO_EXPERIMENT_FRAME_SYMBOLS = 32
CFO_EXPERIMENT_DELAY = 100
CFO_EXPERIMENT_SNRS = tuple(float(s) for s in range(-16, -5))

SFO_EXPERIMENT_BW = 250000
SFO_EXPERIMENT_SFOS = (5.0, 10.0)
# (mode, os)
SFO_EXPERIMENT_RECEIVERS = ((ReceiverMode.sfoNoRealign, 1), (ReceiverMode.sfoRealign, 1), (ReceiverMode.sfoRealign, 2))
# shorter than the earliest first drift (symbol 48 at 10 Hz, preamble included) and well beyond the latest one (symbol 97 at 5 Hz)
SFO_FRAME_LENGTHS = (32, 200)
SFO_EXPERIMENT_SNRS = tuple(float(s) for s in range(-16, -3))

OnRecord = typing.Callable[[SweepSpec, BerRecord], None]


def cfoExperimentSpecs(seed: int = DEFAULT_SEED, snrPoints: typing.Sequence[float] = CFO_EXPERIMENT_SNRS, minBitErrors: int = DEFAULT_MIN_BIT_ERRORS, maxFrames: int = DEFAULT_MAX_FRAMES, baseline: bool = False) -> typing.List[SweepSpec]:
	"""Every CFO with each of the three CFO receivers. The synchronizing receivers rely on the repeated peak alone (threshold 0): the harness knows a frame is there.
	`baseline` adds the compensating receiver on a CFO-free channel first."""
	params = makeParams(EXPERIMENT_SF, CFO_EXPERIMENT_BW, 1)
	cfos = list(CFO_EXPERIMENT_CFOS)
	res = []
	if baseline:
		res.append((0.0, ReceiverMode.timeoffsetSyncCfoComp))
	res.extend((cfo, mode) for cfo in cfos for mode in CFO_EXPERIMENT_MODES)
	return [
		SweepSpec(
			params,
			cr=EXPERIMENT_CR,
			frameLenSymbols=CFO_EXPERIMENT_FRAME_SYMBOLS,
			snrPoints=snrPoints,
			impairments=ChannelImpairments(cfoHz=cfo, delaySamples=CFO_EXPERIMENT_DELAY),
			receiverMode=mode,
			minBitErrors=minBitErrors,
			maxFrames=maxFrames,
			seed=seed,
			threshold=0.0,
		)
		for cfo, mode in res
	]


def sfoExperimentSpecs(seed: int = DEFAULT_SEED, snrPoints: typing.Sequence[float] = SFO_EXPERIMENT_SNRS, minBitErrors: int = DEFAULT_MIN_BIT_ERRORS, maxFrames: int = DEFAULT_MAX_FRAMES, frameLengths: typing.Sequence[int] = SFO_FRAME_LENGTHS) -> typing.Dict[int, typing.List[SweepSpec]]:
	"""For each frame length: every SFO with no realignment, realignment and realignment with 2x oversampling"""
	res = {}
	for frameLen in frameLengths:
		specs = []
		for sfo in SFO_EXPERIMENT_SFOS:
			for mode, os in SFO_EXPERIMENT_RECEIVERS:
				specs.append(
					SweepSpec(
						makeParams(EXPERIMENT_SF, SFO_EXPERIMENT_BW, os),
						cr=EXPERIMENT_CR,
						frameLenSymbols=frameLen,
						snrPoints=snrPoints,
						impairments=ChannelImpairments(sfoHz=sfo),
						receiverMode=mode,
						minBitErrors=minBitErrors,
						maxFrames=maxFrames,
						seed=seed,
					)
				)
		res[frameLen] = specs
	return res


def runSpecs(specs: typing.Iterable[SweepSpec], workers: int = 1, onRecord: typing.Optional[OnRecord] = None) -> typing.List[BerRecord]:
	res = []
	for spec in specs:
		for rec in iterSweep(spec, workers):
			if onRecord is not None:
				onRecord(spec, rec)
			res.append(rec)
	return res


def _save(records: typing.Iterable[BerRecord], path: Path) -> Path:
	path.parent.mkdir(parents=True, exist_ok=True)
	with path.open("wt", encoding="utf-8", newline="") as f:
		writeBerCsv(records, f)
	return path


def replicateCfoExperiment(outDir: Path, workers: int = 1, onRecord: typing.Optional[OnRecord] = None, **kwargs) -> typing.Dict[Path, typing.List[BerRecord]]:
	"""Writes `cfo_experiment.csv` into `outDir`. `kwargs` go to `cfoExperimentSpecs`."""
	records = runSpecs(cfoExperimentSpecs(**kwargs), workers, onRecord)
	return {_save(records, Path(outDir) / "cfo_experiment.csv"): records}


def replicateSfoExperiment(outDir: Path, workers: int = 1, onRecord: typing.Optional[OnRecord] = None, **kwargs) -> typing.Dict[Path, typing.List[BerRecord]]:
	"""Writes `sfo_experiment_<N>sym.csv` per frame length into `outDir`. `kwargs` go to `sfoExperimentSpecs`."""
	res = {}
	for frameLen, specs in sfoExperimentSpecs(**kwargs).items():
		records = runSpecs(specs, workers, onRecord)
		res[_save(records, Path(outDir) / ("sfo_experiment_" + str(frameLen) + "sym.csv"))] = records
	return res
