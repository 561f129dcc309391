"""Repository test package"""
