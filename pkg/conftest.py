import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'tbverify.test_settings')
django.setup()
