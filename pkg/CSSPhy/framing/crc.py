"""CRC-16/CCITT over the payload bytes: polynomial 0x1021, init 0x0000, no reflection, no final XOR"""

from binascii import crc_hqx

__all__ = ("CRC_POLY", "CRC_INIT", "CRC_BYTES", "crc16", "crcBytes")

CRC_POLY = 0x1021
CRC_INIT = 0x0000
CRC_BYTES = 2


def crc16(data: bytes) -> int:
	return crc_hqx(bytes(data), CRC_INIT)


def crcBytes(data: bytes) -> bytes:
	"""The CRC as appended to the payload, big-endian"""
	return crc16(data).to_bytes(CRC_BYTES, "big")
