''' defining regexes for the names of spaces '''

dimension = r'(?P<dim>[1-9][0-9]*)'
scale = r'(?::(?P<scale>[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?))?'
euclidean = r'^euclidean%s$' % dimension
hyperbolic = r'^h%s%s$' % (dimension, scale)
