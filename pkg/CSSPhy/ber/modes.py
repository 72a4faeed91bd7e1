from enum import IntEnum

__all__ = ("ReceiverMode", "receiverModeNames", "receiverModeFromName", "SYNC_MODES", "SFO_MODES")


class ReceiverMode(IntEnum):
	alignedNoComp = 0
	timeoffsetSync = 1
	timeoffsetSyncCfoComp = 2
	sfoNoRealign = 3
	sfoRealign = 4


receiverModeNames = {
	ReceiverMode.alignedNoComp: "aligned-no-comp",
	ReceiverMode.timeoffsetSync: "timeoffset-sync",
	ReceiverMode.timeoffsetSyncCfoComp: "timeoffset-sync+cfo-comp",
	ReceiverMode.sfoNoRealign: "sfo-no-realign",
	ReceiverMode.sfoRealign: "sfo-realign",
}

_namesToModes = {v: k for k, v in receiverModeNames.items()}

SYNC_MODES = frozenset((ReceiverMode.timeoffsetSync, ReceiverMode.timeoffsetSyncCfoComp))
SFO_MODES = frozenset((ReceiverMode.sfoNoRealign, ReceiverMode.sfoRealign))


def receiverModeFromName(name: str) -> ReceiverMode:
	mode = _namesToModes.get(name, None)
	if mode is None:
		raise KeyError(name, tuple(_namesToModes))
	return mode
