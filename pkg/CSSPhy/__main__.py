"""This module defines the CLI"""
import os
import sys
import typing
import warnings
from pathlib import Path

from plumbum import cli
from pantarei import chosenProgressReporter

from . import decodeStream, modulateFrame
from .ber import SweepSpec, iterSweep, writeBerCsv
from .ber.experiments import DEFAULT_SEED, cfoExperimentSpecs, replicateCfoExperiment, replicateSfoExperiment, sfoExperimentSpecs
from .ber.modes import receiverModeNames
from .core.demodulator import demodSymbols
from .core.errors import ConfigError, DecodeError, IqFileFormatError
from .fileFormats import SEED_ENV_VAR, SimulatorConfig, parseConfig, parseConfigFile, readIqFile, saveConfigFile, writeIqFile, writeTrace

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DECODE = 2
EXIT_IO = 3


def runGuarded(func: typing.Callable[[], typing.Optional[int]]) -> int:
	"""Maps the exceptions of a command to exit codes, printing the message instead of a traceback"""
	try:
		res = func()
	except (OSError, IqFileFormatError) as ex:
		print("I/O error:", ex, file=sys.stderr)
		return EXIT_IO
	except DecodeError as ex:
		print("Decoding failed:", ex, file=sys.stderr)
		return EXIT_DECODE
	except ConfigError as ex:
		print("Bad config entry " + repr(ex.key) + ":", *ex.args[1:], file=sys.stderr)
		return EXIT_USAGE
	except (ValueError, KeyError, NotImplementedError) as ex:
		print("Error:", ex, file=sys.stderr)
		return EXIT_USAGE
	return EXIT_OK if res is None else res


def parseSnrList(s: str) -> typing.Tuple[float, ...]:
	"""`-16,-14,-12` or `start:stop:step` (stop included)"""
	if ":" in s:
		parts = [float(p) for p in s.split(":")]
		if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
			raise ValueError("SNR range must be start:stop:step with a positive step", s)
		start, stop, step = parts
		count = int(round((stop - start) / step)) + 1
		return tuple(start + i * step for i in range(count))
	res = tuple(float(p) for p in s.split(",") if p.strip())
	if not res:
		raise ValueError("Empty SNR list", s)
	return res


def masterSeed(explicit: typing.Optional[int]) -> int:
	if explicit is not None:
		return explicit
	v = os.environ.get(SEED_ENV_VAR, "").strip()
	if not v:
		return DEFAULT_SEED
	try:
		return int(v, 0)
	except ValueError as ex:
		raise ConfigError(SEED_ENV_VAR, "must be an integer", v) from ex


class CSSPhyCLI(cli.Application):
	"""CSSPhy is a LoRa-style chirp-spread-spectrum PHY: modulation, decoding, a channel simulator and BER sweeps."""


class CSSPhyConfiguredCLI(cli.Application):
	"""A CLI command driven by a simulator config"""

	configFile = cli.SwitchAttr(["-c", "--config"], cli.ExistingFile, default=None, help="Simulator config (.json, or .yaml if the YAML serializer is installed). Defaults apply without it.")

	def loadConfig(self) -> SimulatorConfig:
		if self.configFile is None:
			return parseConfig(None)
		return parseConfigFile(Path(self.configFile))


class CSSPhyIqInputCLI(CSSPhyConfiguredCLI):
	raw = cli.Flag(["--raw"], help="The IQ file is a headerless complex float32 capture sampled at os * bw")

	def loadIq(self, cfg: SimulatorConfig, path: Path):
		stream = readIqFile(path, raw=self.raw, rate=cfg.params.fs if self.raw else None)
		if stream.rate != cfg.params.fs:
			warnings.warn("Capture rate " + repr(stream.rate) + " Hz differs from the nominal os * bw = " + repr(cfg.params.fs) + " Hz")
		return stream


@CSSPhyCLI.subcommand("modulate")
class CSSPhyModulateCLI(CSSPhyConfiguredCLI):
	"""Modulates the bytes of a file into a frame and writes it as an IQ file"""

	impair = cli.Flag(["-I", "--impair"], help="Pass the frame through the channel described by the `channel` config section")
	raw = cli.Flag(["--raw"], help="Write a headerless complex float32 file")

	def main(self, payloadFile: cli.ExistingFile, iqFile: str):  # pylint:disable=arguments-differ
		def cmd():
			cfg = self.loadConfig()
			payload = Path(payloadFile).read_bytes()
			buf = modulateFrame(payload, cfg.params, cfg.frame, cfg.channel if self.impair else None)
			writeIqFile(Path(iqFile), buf, raw=self.raw)
			print(len(payload), "bytes ->", len(buf), "samples at", buf.rate, "Hz")

		return runGuarded(cmd)


@CSSPhyCLI.subcommand("demodulate")
class CSSPhyDemodulateCLI(CSSPhyIqInputCLI):
	"""Demodulates an IQ file as a plain stream of consecutive symbols, no synchronization. Prints one `index symbol peak` line per symbol."""

	start = cli.SwitchAttr(["-s", "--start"], int, default=0, help="Index of the first sample of the first symbol")
	count = cli.SwitchAttr(["-n", "--count"], int, default=None, help="Symbols to demodulate, all whole symbols by default")

	def main(self, iqFile: cli.ExistingFile):  # pylint:disable=arguments-differ
		def cmd():
			cfg = self.loadConfig()
			stream = self.loadIq(cfg, Path(iqFile))
			for i, r in enumerate(demodSymbols(stream, cfg.params, cfg.receiver.demod, self.start, self.count)):
				print(i, r.symbol, r.peakMagnitude)

		return runGuarded(cmd)


@CSSPhyCLI.subcommand("decode")
class CSSPhyDecodeCLI(CSSPhyIqInputCLI):
	"""Finds a frame in an IQ file, decodes it and writes the payload. Exits with 2 if no frame is found, the header is broken or the CRC does not match."""

	trace = cli.SwitchAttr(["-t", "--trace"], str, default=None, help="Write the per-symbol diagnostic trace CSV here")

	def main(self, iqFile: cli.ExistingFile, payloadFile: str):  # pylint:disable=arguments-differ
		def cmd():
			cfg = self.loadConfig()
			stream = self.loadIq(cfg, Path(iqFile))
			received = decodeStream(stream, cfg.params, cfg.frame, cfg.receiver)
			Path(payloadFile).write_bytes(received.frame.payload)
			if self.trace is not None:
				with Path(self.trace).open("wt", encoding="utf-8", newline="") as f:
					writeTrace(received, f)
			if not received.crcOk:
				print("CRC mismatch", file=sys.stderr)
				return EXIT_DECODE
			print(len(received.frame.payload), "bytes decoded, frame starts at sample", received.sync.frameStart)
			return EXIT_OK

		return runGuarded(cmd)


def runSweepsWithProgress(specs: typing.Sequence[SweepSpec], workers: int, title: str) -> typing.List:
	res = []
	with chosenProgressReporter(sum(len(s.snrPoints) for s in specs), title) as pb:
		for spec in specs:
			for rec in iterSweep(spec, workers):
				res.append(rec)
				key = receiverModeNames[spec.receiverMode] + " @ " + str(rec.snrDb) + " dB"
				pb.report(key, incr=1, op="swept")
				print(key, "ber", rec.ber, "frames", rec.frames, "" if rec.converged else "(frame cap hit)", file=pb)
	return res


@CSSPhyCLI.subcommand("ber")
class CSSPhyBerCLI(CSSPhyConfiguredCLI):
	"""Runs the BER sweep of the `sweep` config section and writes the curve as CSV"""

	workers = cli.SwitchAttr(["-j", "--workers"], int, default=None, help="Worker processes, overrides `sweep.workers`")

	def main(self, csvFile: str):  # pylint:disable=arguments-differ
		def cmd():
			cfg = self.loadConfig()
			workers = self.workers if self.workers is not None else cfg.sweep.workers
			records = runSweepsWithProgress([cfg.sweepSpec()], workers, "BER sweep")
			with Path(csvFile).open("wt", encoding="utf-8", newline="") as f:
				writeBerCsv(records, f)

		return runGuarded(cmd)


class CSSPhyExperimentCLI(cli.Application):
	outDir = cli.SwitchAttr(["-O", "--output-dir"], str, default=".", help="The dir to which the CSV files are written")
	seed = cli.SwitchAttr(["--seed"], int, default=None, help="Master seed, " + SEED_ENV_VAR + " or " + str(DEFAULT_SEED) + " by default")
	snr = cli.SwitchAttr(["--snr"], str, default=None, help="SNR points in dB: a comma-separated list or start:stop:step")
	minBitErrors = cli.SwitchAttr(["--min-bit-errors"], int, default=100, help="Stop a point after this many bit errors")
	maxFrames = cli.SwitchAttr(["--max-frames"], int, default=100000, help="Stop a point after this many frames")
	workers = cli.SwitchAttr(["-j", "--workers"], int, default=os.cpu_count() or 1, help="Worker processes")

	def specKwargs(self) -> typing.Dict[str, typing.Any]:
		res = {"seed": masterSeed(self.seed), "minBitErrors": self.minBitErrors, "maxFrames": self.maxFrames}
		if self.snr is not None:
			res["snrPoints"] = parseSnrList(self.snr)
		return res

	def runReplication(self, specCount: int, replicate: typing.Callable, **kwargs) -> None:
		with chosenProgressReporter(specCount, "replicating") as pb:

			def onRecord(spec, rec):
				key = receiverModeNames[spec.receiverMode] + " os" + str(spec.params.os) + " " + str(spec.frameLenSymbols) + "sym @ " + str(rec.snrDb) + " dB"
				pb.report(key, incr=1, op="swept")
				print(key, "ber", rec.ber, file=pb)

			written = replicate(Path(self.outDir), self.workers, onRecord, **kwargs)
		for path in written:
			print("written", path)


@CSSPhyCLI.subcommand("fig2")
class CSSPhyCfoExperimentCLI(CSSPhyExperimentCLI):
	"""BER of the three CFO receivers (aligned, time-offset synchronized, synchronized with residual CFO compensation) at 10 and 10.1 kHz CFO. Writes cfo_experiment.csv."""

	baseline = cli.Flag(["--baseline"], help="Also sweep the compensating receiver without CFO")

	def main(self):  # pylint:disable=arguments-differ
		def cmd():
			kwargs = self.specKwargs()
			kwargs["baseline"] = self.baseline
			count = sum(len(s.snrPoints) for s in cfoExperimentSpecs(**kwargs))
			self.runReplication(count, replicateCfoExperiment, **kwargs)

		return runGuarded(cmd)


@CSSPhyCLI.subcommand("fig3")
class CSSPhySfoExperimentCLI(CSSPhyExperimentCLI):
	"""BER with 5 and 10 Hz SFO, without realignment, with realignment and with realignment at 2x oversampling, for a short and a long frame. Writes sfo_experiment_<N>sym.csv per frame length."""

	def main(self):  # pylint:disable=arguments-differ
		def cmd():
			kwargs = self.specKwargs()
			count = sum(len(s.snrPoints) for specs in sfoExperimentSpecs(**kwargs).values() for s in specs)
			self.runReplication(count, replicateSfoExperiment, **kwargs)

		return runGuarded(cmd)


@CSSPhyCLI.subcommand("cfo-experiment")
class CSSPhyCfoExperimentAliasCLI(CSSPhyCfoExperimentCLI):
	"""Same as `fig2`"""


@CSSPhyCLI.subcommand("sfo-experiment")
class CSSPhySfoExperimentAliasCLI(CSSPhySfoExperimentCLI):
	"""Same as `fig3`"""


@CSSPhyCLI.subcommand("init-config")
class CSSPhyInitConfigCLI(cli.Application):
	"""Writes a config with every entry set to its default"""

	force = cli.Flag(["-f", "--force"], help="Overwrite an existing file")

	def main(self, configFile: str):  # pylint:disable=arguments-differ
		def cmd():
			path = Path(configFile)
			if path.exists() and not self.force:
				raise ValueError("File exists, use --force to overwrite", str(path))
			saveConfigFile(SimulatorConfig(), path)

		return runGuarded(cmd)


if __name__ == "__main__":
	CSSPhyCLI.run()
