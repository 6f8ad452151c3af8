# QOsc coherent states package
