"""Tests for yaml-schema-validator."""