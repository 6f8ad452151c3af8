# QOsc deformed Hermite families package
