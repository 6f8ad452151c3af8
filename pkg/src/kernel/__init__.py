# QOsc q-special-function kernel package
