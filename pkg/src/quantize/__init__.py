# QOsc quantization package
