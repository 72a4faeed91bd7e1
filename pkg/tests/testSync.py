#!/usr/bin/env python3
import math
import sys
import warnings
from pathlib import Path
import unittest

import numpy as np

thisDir = Path(__file__).absolute().parent
repoRootDir = thisDir.parent

sys.path.insert(0, str(repoRootDir))

from CSSPhy import decodeStream, modulateFrame
from CSSPhy.channel import ChannelImpairments, applyAwgn, applyCfo, applyImpairments, cfoTimeOffset
from CSSPhy.core.demodulator import demodBlocks
from CSSPhy.core.errors import PreambleNotFoundError
from CSSPhy.core.iqBuffer import IqBuffer
from CSSPhy.core.modulator import modulateSymbols
from CSSPhy.core.params import makeParams
from CSSPhy.framing import FrameConfig, frameSegments, payloadSymbolCount, preambleAndDelimiterSamples
from CSSPhy.receiver import ReceiverConfig, SfoTracker, compensateCfo, detectionSpectrum, detectPreamble, estimateResidualCfo, firstDriftSymbol, preambleRegion, realignSamples, realignStream, sfoNextDrift, synchronize


def impairedFrame(params, imp, dataSymbols=(3, 70, 150, 220)):
	return applyImpairments(frameSegments(dataSymbols, params), params, imp)


class DetectionTests(unittest.TestCase):
	def testDelays(self):
		p = makeParams(8, 125000)
		for tau in (1, 17, 100):
			with self.subTest(tau=tau):
				stream = impairedFrame(p, ChannelImpairments(delaySamples=tau))
				sync = detectPreamble(stream, p)
				self.assertTrue(sync.detected)
				self.assertEqual(sync.sPreHat, 256 - tau)
				frameStart = synchronize(stream, sync, p)
				self.assertEqual(sync.preambleStart % p.chips, tau)
				self.assertEqual(frameStart, tau + preambleAndDelimiterSamples(p))

	def testNoiseIsNotDetected(self):
		p = makeParams(8, 125000)
		rng = np.random.default_rng(99)
		n = 64 * p.chips
		noise = IqBuffer((rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2), p.fs)
		self.assertFalse(detectPreamble(noise, p).detected)
		with self.assertRaises(PreambleNotFoundError):
			decodeStream(noise, p)

	def testPaddedSpectrumKeepsBetweenBinPeaks(self):
		p = makeParams(8, 125000)
		y = applyCfo(modulateSymbols([0, 0], p), ChannelImpairments(cfoHz=-0.5 * p.bw / p.chips))
		blocks = y.samples.reshape(-1, p.chips)
		padded = detectionSpectrum(blocks, p)
		self.assertEqual(padded.shape, (2, 2 * p.chips))
		self.assertEqual(int(np.argmax(padded[0])), 1)
		self.assertAlmostEqual(float(padded[0].max()), p.chips, delta=1e-6)
		_symbols, plain = demodBlocks(blocks, p)
		self.assertLess(float(plain[0].max()), 0.7 * p.chips)

	def testStrongNoiseWithFixedThreshold(self):
		p = makeParams(8, 125000)
		silence = IqBuffer(np.zeros(64 * p.chips), p.fs)
		for seed in range(5):
			with self.subTest(seed=seed):
				noise = applyAwgn(silence, ChannelImpairments(snrDb=-30, seed=seed))
				self.assertFalse(detectPreamble(noise, p, 0.5 * p.chips).detected)

	def testShortStreamIsNotAFrame(self):
		p = makeParams(8, 125000)
		with self.assertRaises(PreambleNotFoundError):
			decodeStream(IqBuffer(np.ones(3 * p.chips), p.fs), p)

	def testTooShortStream(self):
		p = makeParams(8, 125000)
		with self.assertRaises(ValueError):
			detectPreamble(IqBuffer(np.zeros(7 * p.chips), p.fs), p)

	def testSynchronizeNeedsDetection(self):
		p = makeParams(8, 125000)
		stream = impairedFrame(p, ChannelImpairments())
		sync = detectPreamble(IqBuffer(np.zeros(16 * p.chips), p.fs), p)
		self.assertFalse(sync.detected)
		with self.assertRaises(ValueError):
			synchronize(stream, sync, p)

	def testSyncWordMismatchWarns(self):
		p = makeParams(8, 125000)
		stream = impairedFrame(p, ChannelImpairments())
		sync = detectPreamble(stream, p)
		with self.assertWarns(UserWarning):
			synchronize(stream, sync, p, syncWord=(0x30, 0x10))

	def testOversampledBoundary(self):
		p = makeParams(8, 125000, 2)
		for tau in (2, 50, 100):
			with self.subTest(tau=tau):
				stream = impairedFrame(p, ChannelImpairments(delaySamples=tau))
				sync = detectPreamble(stream, p)
				self.assertTrue(sync.detected)
				self.assertEqual(synchronize(stream, sync, p), tau + preambleAndDelimiterSamples(p))


class CfoTests(unittest.TestCase):
	def testTimeOffsetSync(self):
		p = makeParams(8, 125000)
		delay = 100
		stream = impairedFrame(p, ChannelImpairments(cfoHz=10e3, delaySamples=delay))
		sync = detectPreamble(stream, p)
		self.assertTrue(sync.detected)
		frameStart = synchronize(stream, sync, p)
		self.assertEqual(frameStart - (delay + preambleAndDelimiterSamples(p)), 20)
		self.assertEqual(frameStart - (delay + preambleAndDelimiterSamples(p)), cfoTimeOffset(10e3, p))

	def testNoisyDetectionBetweenBins(self):
		p = makeParams(8, 125000)
		delay = 100
		for snrDb in (10, -6):
			for seed in range(20):
				with self.subTest(snrDb=snrDb, seed=seed):
					stream = modulateFrame(b"between bins", p, FrameConfig(), ChannelImpairments(snrDb=snrDb, cfoHz=10e3, delaySamples=delay, seed=seed))
					sync = detectPreamble(stream, p, 0.0)
					self.assertTrue(sync.detected)
					self.assertEqual(sync.sPreHat, 136)
					self.assertEqual(synchronize(stream, sync, p) - (delay + preambleAndDelimiterSamples(p)), 20)
					if snrDb > 0:
						received = decodeStream(stream, p, FrameConfig(), ReceiverConfig(threshold=0.0))
						self.assertTrue(received.crcOk)
						self.assertEqual(received.frame.payload, b"between bins")

	def testResidualEstimate(self):
		p = makeParams(8, 125000)
		cfo = 10e3
		stream = impairedFrame(p, ChannelImpairments(cfoHz=cfo, delaySamples=100))
		sync = detectPreamble(stream, p)
		synchronize(stream, sync, p)
		est = estimateResidualCfo(preambleRegion(stream, sync, p), p)
		residualBins = cfo / p.fs * p.chips - round(cfo / p.fs * p.chips)
		self.assertAlmostEqual(est.binOffset(), residualBins, places=6)
		self.assertGreater(est.deltaPhiHat, 0)
		self.assertAlmostEqual(est.residualHz(p), residualBins * p.bw / p.chips, places=3)

	def testResidualEstimateSign(self):
		p = makeParams(8, 125000)
		for cfo in (100.0, -100.0):
			with self.subTest(cfo=cfo):
				stream = impairedFrame(p, ChannelImpairments(cfoHz=cfo))
				est = estimateResidualCfo(stream[: p.nPre * p.chips], p)
				self.assertEqual(est.deltaPhiHat > 0, cfo > 0)
				self.assertAlmostEqual(est.deltaPhiHat, 2 * math.pi * p.chips * cfo / p.fs, places=6)

	def testEstimateImprovesWithMorePairs(self):
		p = makeParams(8, 125000)
		cfo = 100.0
		clean = applyCfo(modulateSymbols([0] * 8, p), ChannelImpairments(cfoHz=cfo))
		estimates = {1: [], 7: []}
		for trial in range(100):
			noisy = applyAwgn(clean, ChannelImpairments(snrDb=0, seed=trial))
			for pairs, found in estimates.items():
				found.append(estimateResidualCfo(noisy[: (pairs + 1) * p.chips], p).deltaPhiHat)
		self.assertAlmostEqual(float(np.mean(estimates[7])), 2 * math.pi * p.chips * cfo / p.fs, delta=0.02)
		self.assertGreater(float(np.var(estimates[1])), 3 * float(np.var(estimates[7])))

	def testCompensationRestoresTheTone(self):
		p = makeParams(8, 125000)
		stream = impairedFrame(p, ChannelImpairments(cfoHz=100.0))
		est = estimateResidualCfo(stream[: p.nPre * p.chips], p)
		fixed = compensateCfo(stream, est, p)
		clean = impairedFrame(p, ChannelImpairments())
		body = len(clean) - p.samplesPerSymbol
		ratio = fixed.samples[:body] / clean.samples[:body]
		self.assertTrue(np.allclose(ratio, ratio[0], rtol=0, atol=1e-6))

	def testEstimateNeedsTwoSymbols(self):
		p = makeParams(8, 125000)
		with self.assertRaises(ValueError):
			estimateResidualCfo(IqBuffer(np.ones(2 * p.chips - 1), p.fs), p)

	def testLoopback(self):
		p = makeParams(8, 125000)
		payload = b"chirp chirp"
		stream = modulateFrame(payload, p, FrameConfig(), ChannelImpairments(snrDb=20, cfoHz=10e3, delaySamples=100, seed=5))
		received = decodeStream(stream, p, FrameConfig(), ReceiverConfig())
		self.assertTrue(received.crcOk)
		self.assertEqual(received.frame.payload, payload)
		self.assertEqual(received.sync.frameStart, 100 + preambleAndDelimiterSamples(p) + 20)
		self.assertIsNotNone(received.cfo)
		self.assertEqual(len(received.trace), 8 + payloadSymbolCount(FrameConfig(payloadLen=len(payload)), p.sf))
		self.assertEqual(received.trace[1].sampleIndex - received.trace[0].sampleIndex, p.chips)

	def testNoiselessLoopbackOversampled(self):
		p = makeParams(7, 250000, 2)
		payload = bytes(range(30))
		stream = modulateFrame(payload, p, FrameConfig(cr=3), ChannelImpairments(cfoHz=-3 * p.bw / p.chips, delaySamples=34))
		received = decodeStream(stream, p, FrameConfig(), ReceiverConfig())
		self.assertTrue(received.crcOk)
		self.assertEqual(received.frame.payload, payload)
		self.assertEqual(received.frame.config.cr, 3)


class SfoTests(unittest.TestCase):
	@staticmethod
	def bruteForceFirstDrift(bw, sfoHz, os):
		f = os * bw
		diff = abs(os * sfoHz)
		g = 0
		while not 2 * g * diff > f:
			g += 1
		return g

	def testFirstDrift(self):
		for sfoHz, expectedG in ((10, 12501), (5, 25001)):
			with self.subTest(sfoHz=sfoHz):
				tracker = SfoTracker(250000, 250000 + sfoHz)
				g = self.bruteForceFirstDrift(250000, sfoHz, 1)
				self.assertEqual(g, expectedG)
				self.assertEqual(sfoNextDrift(tracker, 8), divmod(g, 256))
		self.assertEqual(firstDriftSymbol(250000, 10, 8), 48)
		self.assertEqual(firstDriftSymbol(250000, 5, 8), 97)
		self.assertIsNone(firstDriftSymbol(250000, 0, 8))

	def testBruteForceAllDrifts(self):
		tracker = SfoTracker(250000, 250010)
		drifts = []
		g = 0
		k = 1
		while len(drifts) < 4:
			if 2 * g * 10 > (2 * k - 1) * 250000:
				drifts.append(g)
				k += 1
			g += 1
		found = []
		for _ in range(4):
			found.append(tracker.nextDriftSample)
			tracker.advance()
		self.assertEqual(found, drifts)

	def testOversampledTracker(self):
		p = makeParams(8, 250000, 2)
		tracker = SfoTracker.fromParams(p, 10)
		self.assertEqual(tracker.nominalRate, 500000)
		self.assertEqual(tracker.nextDriftSample, 12501)
		self.assertEqual(sfoNextDrift(tracker, 8), divmod(12501, 512))

	def testRealignDrops(self):
		tracker = SfoTracker(250000, 250010)
		samples = np.arange(30000).astype(np.complex128)
		out, touched = realignSamples(samples, tracker)
		self.assertEqual(touched, [12501])
		self.assertEqual(len(out), 29999)
		self.assertEqual(out[12500], 12500)
		self.assertEqual(out[12501], 12502)
		self.assertEqual(tracker.nextDriftSample, 37501)

	def testRealignInserts(self):
		tracker = SfoTracker(250000, 249990)
		self.assertTrue(tracker.inserts)
		samples = np.arange(30000).astype(np.complex128)
		out, touched = realignSamples(samples, tracker)
		self.assertEqual(touched, [12501])
		self.assertEqual(len(out), 30001)
		self.assertEqual(out[12501], 12501)
		self.assertEqual(out[12502], 12501)

	def testRealignStream(self):
		p = makeParams(8, 250000)
		tracker = SfoTracker.fromParams(p, 10)
		stream = IqBuffer(np.arange(60 * 256).astype(np.complex128), 250010)
		blocks = list(realignStream(stream, tracker, p))
		self.assertEqual(len(blocks), (60 * 256 - 1) // 256)
		self.assertTrue(all(len(b) == 256 for b in blocks))
		with self.assertRaises(ValueError):
			list(realignStream(stream, SfoTracker.fromParams(p, 10), p, 60))

	def testRealignedReceiver(self):
		p = makeParams(8, 250000, 2)
		payload = bytes(range(100))
		stream = modulateFrame(payload, p, FrameConfig(), ChannelImpairments(sfoHz=10))
		with warnings.catch_warnings():
			warnings.simplefilter("ignore")
			received = decodeStream(stream, p, FrameConfig(), ReceiverConfig(sfoRealign=True, sfoHz=10))
		self.assertTrue(received.crcOk)
		self.assertEqual(received.frame.payload, payload)


if __name__ == "__main__":
	unittest.main()
