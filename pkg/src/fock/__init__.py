# QOsc Fock representation package
