from setuptools import setup, find_packages

setup(
    name='gensic',
    version='0.0.1',
    packages=find_packages(exclude=['tests']),
    package_data={
        'gensic': ['config.yml'],
    },
    entry_points={
        'console_scripts': [
            'gensic = gensic.cli.main:main',
        ],
    },
    install_requires=[
        'pyyaml',
        'numpy>=1.17',
        'scipy>=1.7',
    ],
    extras_require={
        'test': [
            'pytest',
        ],
    }
)
