#!/usr/bin/env python3
import sys
from pathlib import Path
import unittest
from fractions import Fraction

import numpy as np

thisDir = Path(__file__).absolute().parent
repoRootDir = thisDir.parent

sys.path.insert(0, str(repoRootDir))

from CSSPhy.core.params import LoraParams, makeParams
from CSSPhy.core.modulator import ChirpDirection, ChirpSegment, evalChirp, foldIndex, genDownchirp, genSymbol, genUpchirp, modulateSymbols, symbolCycles, synthesizeSegments


class ParamsTests(unittest.TestCase):
	def testDerived(self):
		p = makeParams(8, 125000, 1, 8)
		self.assertEqual(p.chips, 256)
		self.assertEqual(p.fs, 125000)
		self.assertEqual(p.symbolDuration, Fraction(2048, 1000000))
		self.assertEqual(p.symbolDuration * p.bw, p.chips)

		p = makeParams(12, 500000, 2, 8)
		self.assertEqual(p.chips, 4096)
		self.assertEqual(p.fs, 1000000)
		self.assertEqual(p.samplesPerSymbol, 8192)

	def testRejects(self):
		for args in ((5, 125000, 1, 8), (13, 125000, 1, 8), (8, 200000, 1, 8), (8, 125000, 0, 8), (8, 125000, 1, 1)):
			with self.subTest(args=args):
				with self.assertRaises(ValueError):
					makeParams(*args)

	def testImmutableAndHashable(self):
		p = makeParams(7, 250000)
		with self.assertRaises(AttributeError):
			p.sf = 8
		self.assertEqual(p, LoraParams(7, 250000, 1, 8))
		self.assertEqual(len({p, makeParams(7, 250000)}), 1)
		self.assertEqual(p.replace(os=2).fs, 500000)


class ModulationTests(unittest.TestCase):
	def testUnitModulus(self):
		for sf in range(6, 10):
			for os in (1, 2):
				p = makeParams(sf, 125000, os)
				for s in (0, 1, p.chips // 3, p.chips - 1):
					with self.subTest(sf=sf, os=os, s=s):
						y = genSymbol(s, p)
						self.assertEqual(len(y), os * p.chips)
						self.assertTrue(np.allclose(np.abs(y.samples), 1.0, rtol=0, atol=1e-12))

	def testFirstSampleOfUpchirp(self):
		p = makeParams(9, 125000)
		self.assertEqual(genSymbol(0, p).samples[0], 1 + 0j)
		self.assertEqual(genDownchirp(p).samples[0], 1 + 0j)

	def testOrthogonality(self):
		p = makeParams(7, 125000)
		mat = np.array([genSymbol(s, p).samples for s in range(p.chips)])
		gram = np.abs(mat @ mat.conj().T)
		self.assertTrue(np.allclose(np.diag(gram), p.chips, rtol=0, atol=1e-9))
		offDiag = gram[~np.eye(p.chips, dtype=bool)]
		self.assertLess(offDiag.max(), 1e-9)

	def testPhaseByHand(self):
		p = makeParams(7, 125000)
		expected = np.exp(2j * np.pi * (1 / 256 + 1 / 128 - 1 / 2))
		self.assertLess(abs(genSymbol(1, p).samples[1] - expected), 1e-12)

	def testFold(self):
		p = makeParams(7, 125000)
		self.assertEqual(foldIndex(64, p), 64)

		cycles = symbolCycles(64, 7, 1, np.arange(p.chips))
		freq = np.mod(np.diff(cycles) + 0.5, 1.0) - 0.5
		drops = np.nonzero(np.diff(freq) < 0)[0]
		self.assertEqual(drops.tolist(), [63])

	def testUpDownChirps(self):
		p = makeParams(8, 250000)
		up = genUpchirp(p).samples
		down = genDownchirp(p).samples
		self.assertTrue(np.array_equal(up, genSymbol(0, p).samples))
		self.assertTrue(np.allclose(up * down, 1.0, rtol=0, atol=1e-12))
		self.assertTrue(np.array_equal(down, np.conj(up)))

	def testModulateSymbols(self):
		p = makeParams(6, 125000, 2)
		self.assertEqual(len(modulateSymbols([], p)), 0)
		self.assertTrue(np.array_equal(modulateSymbols([5], p).samples, genSymbol(5, p).samples))
		self.assertEqual(len(modulateSymbols([1, 2, 3, 4], p)), 4 * 2 * 64)

	def testSymbolOutOfRange(self):
		p = makeParams(6, 125000)
		with self.assertRaises(ValueError):
			genSymbol(64, p)
		with self.assertRaises(ValueError):
			genSymbol(-1, p)

	def testContinuousChirpMatchesSamples(self):
		p = makeParams(8, 125000)
		for s in (0, 17, 200):
			with self.subTest(s=s):
				self.assertTrue(np.allclose(evalChirp(np.arange(p.chips), s, p.sf), genSymbol(s, p).samples, rtol=0, atol=1e-9))
		self.assertTrue(np.allclose(evalChirp(np.arange(p.chips), 0, p.sf, ChirpDirection.down), genDownchirp(p).samples, rtol=0, atol=1e-9))

	def testSegments(self):
		p = makeParams(8, 125000)
		y = synthesizeSegments([ChirpSegment(3), ChirpSegment(0, ChirpDirection.down, p.chips // 4)], p)
		self.assertEqual(len(y), p.chips + p.chips // 4)
		self.assertTrue(np.array_equal(y.samples[p.chips :], genDownchirp(p).samples[: p.chips // 4]))


if __name__ == "__main__":
	unittest.main()
