import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'fraudlab.settings')
django.setup()
