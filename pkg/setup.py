import setuptools


with open('README.rst', "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name='nkgspline',
    version='0.3',
    description = 'Extended cubic B-spline collocation for the nonlinear Klein-Gordon equation.',
    long_description=long_description,
    long_description_content_type='text/x-rst',
    packages=setuptools.find_packages(exclude=['tests']),
    package_data={'nkgspline': ['tables/*.cfg']},
    classifiers=[
        'Programming Language :: Python :: 3',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
    ],
    python_requires='>=3.8',
    install_requires = [
        'numpy',
        'scipy',
        'pandas',
        'path<17',
    ],
    extras_require = {
        'test': ['pytest'],
    },
    entry_points = {
        'console_scripts': ['nkgspline = nkgspline.cli:main'],
    },
)
