#!/usr/bin/env python3
import math
import sys
import tempfile
from io import StringIO
from pathlib import Path
import unittest

thisDir = Path(__file__).absolute().parent
repoRootDir = thisDir.parent

sys.path.insert(0, str(repoRootDir))

from CSSPhy.ber import CSV_COLUMNS, ReceiverMode, SweepSpec, readBerCsv, receiverModeFromName, runPoint, runSweep, writeBerCsv
from CSSPhy.ber.experiments import CFO_EXPERIMENT_CFOS, cfoExperimentSpecs, replicateCfoExperiment, sfoExperimentSpecs
from CSSPhy.channel import ChannelImpairments, cfoHalfBinLimit
from CSSPhy.core.params import makeParams


class SweepTests(unittest.TestCase):
	def testNoiselessAligned(self):
		spec = SweepSpec(makeParams(8, 125000), snrPoints=(math.inf,), maxFrames=3, minBitErrors=1)
		(rec,) = runSweep(spec)
		self.assertEqual(rec.frames, 3)
		self.assertEqual(rec.bitErrors, 0)
		self.assertEqual(rec.ber, 0.0)
		self.assertEqual(rec.bits, 3 * spec.payloadBits)
		self.assertFalse(rec.converged)

	def testPayloadBits(self):
		self.assertEqual(SweepSpec(makeParams(8, 125000), cr=4, frameLenSymbols=32).payloadBits, 4 * 32)
		self.assertEqual(SweepSpec(makeParams(7, 125000), cr=1, frameLenSymbols=10).payloadBits, 2 * 28)

	def testValidation(self):
		p = makeParams(8, 125000)
		with self.assertRaises(ValueError):
			SweepSpec(p, snrPoints=())
		with self.assertRaises(ValueError):
			SweepSpec(p, frameLenSymbols=12)
		with self.assertRaises(ValueError):
			SweepSpec(p, maxFrames=0)
		with self.assertRaises(ValueError):
			SweepSpec(p, minBitErrors=0)

	def testDeterminism(self):
		spec = SweepSpec(makeParams(8, 125000), snrPoints=(-14.0,), maxFrames=5, minBitErrors=10 ** 6, seed=42)
		a = runPoint(spec, -14.0, 42)
		b = runPoint(spec, -14.0, 42)
		self.assertEqual(a.counts(), b.counts())
		self.assertEqual(a.frames, 5)

	def testLowSnrConverges(self):
		spec = SweepSpec(makeParams(8, 125000), snrPoints=(-30.0,), maxFrames=50, minBitErrors=100, seed=3)
		(rec,) = runSweep(spec)
		self.assertTrue(rec.converged)
		self.assertGreaterEqual(rec.bitErrors, 100)
		self.assertLess(rec.frames, 50)

	def testCfoBeyondHalfBin(self):
		p = makeParams(8, 125000)
		imp = ChannelImpairments(cfoHz=1.01 * cfoHalfBinLimit(p))
		spec = SweepSpec(p, snrPoints=(math.inf,), impairments=imp, receiverMode=ReceiverMode.alignedNoComp, maxFrames=2, minBitErrors=10 ** 6)
		(rec,) = runSweep(spec)
		self.assertEqual(rec.symbolErrors, rec.symbols)
		self.assertGreater(rec.bitErrors, 0)

	def testCfoWithinHalfBin(self):
		p = makeParams(8, 125000)
		imp = ChannelImpairments(cfoHz=0.9 * cfoHalfBinLimit(p))
		spec = SweepSpec(p, snrPoints=(math.inf,), impairments=imp, maxFrames=2, minBitErrors=1)
		(rec,) = runSweep(spec)
		self.assertEqual(rec.symbolErrors, 0)

	def testSynchronizedReceiversUnderCfo(self):
		p = makeParams(8, 125000)
		imp = ChannelImpairments(cfoHz=10e3, delaySamples=100)
		for mode in (ReceiverMode.timeoffsetSync, ReceiverMode.timeoffsetSyncCfoComp):
			with self.subTest(mode=mode):
				spec = SweepSpec(p, snrPoints=(math.inf,), impairments=imp, receiverMode=mode, maxFrames=2, minBitErrors=1, threshold=0.0)
				(rec,) = runSweep(spec)
				self.assertEqual(rec.bitErrors, 0)

	def testSfoRealignment(self):
		imp = ChannelImpairments(sfoHz=10)
		kwargs = {"frameLenSymbols": 200, "snrPoints": (math.inf,), "impairments": imp, "maxFrames": 1, "minBitErrors": 1}
		(realigned,) = runSweep(SweepSpec(makeParams(8, 250000, 2), receiverMode=ReceiverMode.sfoRealign, **kwargs))
		self.assertEqual(realigned.ber, 0.0)
		(drifting,) = runSweep(SweepSpec(makeParams(8, 250000, 1), receiverMode=ReceiverMode.sfoNoRealign, **kwargs))
		self.assertGreater(drifting.ber, 0.0)

	def testBerFallsWithSnr(self):
		snrs = (-18.0, -17.0, -16.0, -15.0, -14.0)
		spec = SweepSpec(makeParams(8, 125000), snrPoints=snrs, maxFrames=40, minBitErrors=10 ** 6, seed=5)
		bers = [r.ber for r in runSweep(spec)]
		bits = 40 * spec.payloadBits
		for hi, lo in zip(bers, bers[1:]):
			self.assertLessEqual(lo, hi + 2 * math.sqrt(hi * (1 - hi) / bits))
		self.assertGreater(bers[0], bers[-1])

	def testWorkersGiveTheSameRecords(self):
		spec = SweepSpec(makeParams(7, 125000), snrPoints=(-12.0, -8.0), maxFrames=3, minBitErrors=10 ** 6, seed=7)
		self.assertEqual([r.counts() for r in runSweep(spec, 2)], [r.counts() for r in runSweep(spec, 1)])


class CsvTests(unittest.TestCase):
	def testByteIdenticalRuns(self):
		spec = SweepSpec(makeParams(7, 125000), snrPoints=(-10.0, -5.0), maxFrames=2, minBitErrors=10 ** 6, seed=11)
		outputs = []
		for _ in range(2):
			f = StringIO()
			writeBerCsv(runSweep(spec), f)
			outputs.append(f.getvalue())
		self.assertEqual(outputs[0], outputs[1])
		self.assertEqual(outputs[0].splitlines()[0], ",".join(CSV_COLUMNS))

		rows = readBerCsv(StringIO(outputs[0]))
		self.assertEqual(len(rows), 2)
		self.assertEqual(rows[0]["mode"], "aligned-no-comp")
		self.assertEqual(float(rows[1]["snr_db"]), -5.0)
		self.assertEqual(int(rows[0]["seed"]), 11)

	def testForeignCsv(self):
		with self.assertRaises(ValueError):
			readBerCsv(StringIO("a,b\n1,2\n"))

	def testModeNames(self):
		self.assertEqual(receiverModeFromName("timeoffset-sync+cfo-comp"), ReceiverMode.timeoffsetSyncCfoComp)
		with self.assertRaises(KeyError):
			receiverModeFromName("nope")


class ExperimentTests(unittest.TestCase):
	def testCfoSpecs(self):
		specs = cfoExperimentSpecs()
		self.assertEqual(len(specs), 6)
		self.assertEqual({s.impairments.cfoHz for s in specs}, {10e3, 10.1e3})
		self.assertTrue(all(s.threshold == 0.0 and s.params.sf == 8 and s.params.bw == 125000 and s.cr == 4 for s in specs))
		self.assertTrue(all(s.impairments.delaySamples == 100 for s in specs))

		withBaseline = cfoExperimentSpecs(baseline=True)
		self.assertEqual(len(withBaseline), 7)
		self.assertEqual(withBaseline[0].impairments.cfoHz, 0.0)
		self.assertEqual(withBaseline[0].receiverMode, ReceiverMode.timeoffsetSyncCfoComp)

	def testSfoSpecs(self):
		byLength = sfoExperimentSpecs()
		self.assertEqual(sorted(byLength), [32, 200])
		for frameLen, specs in byLength.items():
			self.assertEqual(len(specs), 6)
			self.assertEqual([s.params.os for s in specs], [1, 1, 2, 1, 1, 2])
			self.assertTrue(all(s.frameLenSymbols == frameLen and s.params.bw == 250000 for s in specs))
			self.assertEqual([s.impairments.sfoHz for s in specs], [5.0] * 3 + [10.0] * 3)

	def testReplicationWritesCsv(self):
		with tempfile.TemporaryDirectory() as d:
			seen = []
			written = replicateCfoExperiment(Path(d) / "out", onRecord=lambda spec, rec: seen.append(rec), snrPoints=(math.inf,), maxFrames=1, minBitErrors=1)
			(path,) = written
			self.assertEqual(path.name, "cfo_experiment.csv")
			with path.open("rt", encoding="utf-8") as f:
				rows = readBerCsv(f)
			self.assertEqual(len(rows), 6)
			self.assertEqual(len(seen), 6)

	def testCfoReceiverOrdering(self):
		bers = {}
		for spec in cfoExperimentSpecs(snrPoints=(-10.0,), maxFrames=20, minBitErrors=10 ** 6, seed=3):
			(rec,) = runSweep(spec)
			bers[spec.impairments.cfoHz, spec.receiverMode] = rec.ber
		for cfo in CFO_EXPERIMENT_CFOS:
			with self.subTest(cfo=cfo):
				self.assertGreater(bers[cfo, ReceiverMode.alignedNoComp], 0.3)
				self.assertGreaterEqual(bers[cfo, ReceiverMode.alignedNoComp], bers[cfo, ReceiverMode.timeoffsetSync])
				self.assertGreaterEqual(bers[cfo, ReceiverMode.timeoffsetSync], bers[cfo, ReceiverMode.timeoffsetSyncCfoComp])
		self.assertGreater(bers[10e3, ReceiverMode.timeoffsetSync], 0.0)

	def testCompensationStaysNearTheCfoFreeBaseline(self):
		"""The compensating receiver under CFO does better one dB above than the CFO-free receiver does at the lower SNR"""
		(baselineSpec, *specs) = cfoExperimentSpecs(snrPoints=(-15.0,), maxFrames=80, minBitErrors=10 ** 6, seed=4, baseline=True)
		(baseline,) = runSweep(baselineSpec)
		self.assertGreater(baseline.ber, 0.0)
		for spec in specs:
			if spec.receiverMode != ReceiverMode.timeoffsetSyncCfoComp:
				continue
			with self.subTest(cfo=spec.impairments.cfoHz):
				(rec,) = runSweep(spec.replace(snrPoints=(-14.0,)))
				self.assertLessEqual(rec.ber, baseline.ber)

	def testSfoFloor(self):
		specs = sfoExperimentSpecs(snrPoints=(-6.0, -4.0), maxFrames=10, minBitErrors=10 ** 6, seed=2, frameLengths=(200,))[200]
		drifting = next(s for s in specs if s.impairments.sfoHz == 10.0 and s.receiverMode == ReceiverMode.sfoNoRealign)
		realigned = next(s for s in specs if s.impairments.sfoHz == 10.0 and s.receiverMode == ReceiverMode.sfoRealign and s.params.os == 2)
		floor = [r.ber for r in runSweep(drifting)]
		self.assertTrue(all(b > 1e-3 for b in floor), floor)
		self.assertLess(max(floor) / min(floor), 10)
		self.assertEqual(runSweep(realigned)[-1].ber, 0.0)


if __name__ == "__main__":
	unittest.main()
