#!/usr/bin/env python

# Metadata lives in setup.cfg; this shim keeps `pip install -e ./` from
# requirements.txt working with pip versions that predate PEP 660
import setuptools

if __name__ == "__main__":
    setuptools.setup()
