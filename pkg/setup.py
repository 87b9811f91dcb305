from setuptools import setup

# extract version from __init__.py
with open('thlpu/__init__.py', 'r') as f:
    VERSION_LINE = [l for l in f if l.startswith('__version__')][0]
    VERSION = VERSION_LINE.split('=')[1].strip()[1:-1]

setup(
    name='thlpu',
    version=VERSION,
    packages=[
        'thlpu',
        'thlpu.network',
        'thlpu.cuts',
        'thlpu.eval',
        'thlpu.prep',
        'thlpu.solve',
        'thlpu.utils'
    ],
    license='GNU AGPLv3',
    description='Tree of hubs location with upgrading: MILP formulations, separated cuts '
                'and an enumeration oracle',
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    zip_safe=False,
    python_requires='>=3.9',

    install_requires=[
        'numpy',
        'networkx',
        'highspy',
        'tabulate',
    ],
    extras_require={
        'eval': [
            'pandas',
            'pylint',
            'pytest',
        ],
    },
    entry_points={
        'console_scripts': ['thlpu=thlpu.run:main'],
    },
)
