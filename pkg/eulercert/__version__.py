__title__ = 'eulercert'
__description__ = ('Implicit Euler schemes for quasi-accretive evolution equations and certification of '
                   'Kobayashi-type error bounds.')
__version__ = '0.3.0'

__author__ = 'eulercert developers'
__author_email__ = 'eulercert@users.noreply.github.com'
__maintainer__ = 'eulercert developers'
__maintainer_email__ = 'eulercert@users.noreply.github.com'

__url__ = 'https://github.com/eulercert/eulercert'
__download_url__ = 'https://pypi.python.org/pypi/eulercert'

__copyright__ = 'Copyright (c) 2026 eulercert developers'
__license__ = 'MIT license'
