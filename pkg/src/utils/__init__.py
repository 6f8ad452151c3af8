# QOsc utilities package
