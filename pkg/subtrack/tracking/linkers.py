# -*- coding: utf-8 -*-
"""Links between tracker type names (as used in configuration files) and the tracker implementations."""
from collections import namedtuple

from subtrack.tracking.baselines import GrouseTracker, PastTracker
from subtrack.tracking.constant import GREAT_TRACKER, GROUSE_TRACKER, PAST_TRACKER
from subtrack.tracking.great import GreatTracker


# Trackers
TrackerLinks = namedtuple(
        'TrackerLinks',
        [
            'tracker_type',
            'tracker_class',
            'uses_window',
            'uses_forgetting_factor',
            ],
        )

TRACKER_TYPES_TO_TRACKER_CLASSES = {
        GREAT_TRACKER: TrackerLinks(
            tracker_type=GREAT_TRACKER,
            tracker_class=GreatTracker,
            uses_window=True,
            uses_forgetting_factor=True,
            ),
        GROUSE_TRACKER: TrackerLinks(
            tracker_type=GROUSE_TRACKER,
            tracker_class=GrouseTracker,
            uses_window=False,
            uses_forgetting_factor=False,
            ),
        PAST_TRACKER: TrackerLinks(
            tracker_type=PAST_TRACKER,
            tracker_class=PastTracker,
            uses_window=False,
            uses_forgetting_factor=True,
            ),
        }
