''' radial green's functions, biot-savart fields and linking integrals '''
