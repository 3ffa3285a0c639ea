# -*- coding: utf-8 -*-
"""Tests that linkers contain all possible types defined in constants."""
from subtrack.tracking.constant import TRACKER_TYPES
from subtrack.tracking.interfaces.tracker_interface import SubspaceTrackerInterface
from subtrack.tracking.linkers import TRACKER_TYPES_TO_TRACKER_CLASSES


class TestLinkers(object):

    """Tests that linkers contain all possible types defined in constants."""

    def test_tracker_links_have_all_tracker_types(self):
        """Test each tracker type is in a linker, and every linker key is a tracker type."""
        assert set(TRACKER_TYPES) == set(TRACKER_TYPES_TO_TRACKER_CLASSES.keys())

    def test_tracker_links_are_consistent(self):
        """Test every link names its own key and points at a tracker implementation."""
        for tracker_type, links in TRACKER_TYPES_TO_TRACKER_CLASSES.items():
            assert links.tracker_type == tracker_type
            assert issubclass(links.tracker_class, SubspaceTrackerInterface)

    def test_tracker_interface_members(self):
        """Test that trackers implement exactly the dimensions, the clock, the estimate and the per-sample update."""
        assert SubspaceTrackerInterface.__abstractmethods__ == frozenset(['ambient_dim', 'dim', 'time', 'estimate', 'update'])
