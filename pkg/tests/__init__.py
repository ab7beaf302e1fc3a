"""Tests for ipcg_search package."""
