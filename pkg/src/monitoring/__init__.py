# QOsc monitoring package
