"""Command blueprints registered on app.cli"""
