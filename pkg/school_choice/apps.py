from django.apps import AppConfig


class SchoolChoiceConfig(AppConfig):
    name = 'school_choice'
    verbose_name = 'School choice lotteries'
