#! /usr/bin/env python


descr = """Wilson loop diagrams, their positroid cells and the cancellation of spurious poles"""

import os
from setuptools import setup, find_packages

DISTNAME = "wldpoles"
DESCRIPTION = descr
MAINTAINER = 'Franz Liem'
MAINTAINER_EMAIL = 'franziskus.liem@uzh.ch'
LICENSE = 'Apache2.0'
DOWNLOAD_URL = 'xxx'
VERSION = "0.1.0"

PACKAGES = find_packages(exclude=["tests"])

if __name__ == "__main__":

    if os.path.exists('MANIFEST'):
        os.remove('MANIFEST')

    setup(name=DISTNAME,
          maintainer=MAINTAINER,
          maintainer_email=MAINTAINER_EMAIL,
          description=DESCRIPTION,
          license=LICENSE,
          version=VERSION,
          url=DOWNLOAD_URL,
          download_url=DOWNLOAD_URL,
          packages=PACKAGES,
          install_requires=["flatten-dict", "pandas", "numpy", "sympy", "networkx"],
          scripts=["scripts/wld_poles.py",
                   ],
          )
