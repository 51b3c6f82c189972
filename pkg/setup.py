import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()
with open('requirements.txt', 'r') as req:
    packages = req.read().splitlines()
    try:
        packages.remove('')
    except ValueError:
        pass

setuptools.setup(
    name='sweepdecoder',
    version='0.1.0',
    scripts=[],
    description="Sweep-rule cellular-automaton decoder for 3D toric codes",
    long_description=long_description,
    long_description_content_type="text/markdown",
    install_requires=packages,
    packages=["sweepdecoder", "sweepdecoder/lattice", "sweepdecoder/sweep",
              "sweepdecoder/experiment"],
    entry_points={"console_scripts": ["sweepdecoder=sweepdecoder.run_sweep:main"]},
    include_package_data=True,
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
)
