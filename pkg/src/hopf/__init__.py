# QOsc Hopf structure package
