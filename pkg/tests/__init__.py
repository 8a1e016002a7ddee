"""Tests para RaveXRPC."""
