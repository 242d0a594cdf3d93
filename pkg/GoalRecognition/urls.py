"""
URL configuration for the GoalRecognition project.

The admin browses archived benchmark runs; ``recognition.urls`` exposes the
same archive as JSON.
"""
from django.contrib import admin
from django.urls import path, include

urlpatterns = [
    path('', include('recognition.urls', namespace='recognition')),
    path('admin/', admin.site.urls),
]
