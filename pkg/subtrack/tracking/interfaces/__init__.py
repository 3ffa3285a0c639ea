# -*- coding: utf-8 -*-
"""Interfaces for the components of :mod:`subtrack.tracking`."""
